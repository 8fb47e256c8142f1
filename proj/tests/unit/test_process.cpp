// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "core/process.hpp"
#include "core/random.hpp"
#include "doctest.h"

using mrs::Schedule;
using mrs::Vector;

TEST_CASE("random streams are reproducible and distinct") {
    mrs::RandomSource a(42, 3);
    mrs::RandomSource b(42, 3);
    mrs::RandomSource c(42, 4);
    mrs::RandomSource d(43, 3);
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        const double y = c.normal();
        const double z = d.normal();
        if (i == 0) {
            CHECK(x != y);
            CHECK(x != z);
        }
    }
    CHECK(mrs::mix_seed(1, 0) != mrs::mix_seed(1, 1));
    CHECK(mrs::mix_seed(1, 0) != mrs::mix_seed(0, 1));
}

TEST_CASE("uniform and normal draws have the right low moments") {
    mrs::RandomSource rng(7);
    const int n = 200000;
    double su = 0.0;
    double sn = 0.0;
    double sn2 = 0.0;
    double sn4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sn / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(sn4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("transition moments at the origin and in the stationary limit") {
    const auto s = Schedule::constant(1.0, 1.5, 50.0);
    const Vector x0 = Vector::LinSpaced(3, -1.0, 2.0);
    const Vector mu = Vector::Constant(3, 0.4);
    const auto m0 = mrs::transition_moments(s, x0, mu, 0.0);
    CHECK((m0.mean - x0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m0.std == 0.0);

    const auto inf = mrs::transition_moments(s, x0, mu, 50.0);
    CHECK((inf.mean - mu).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(inf.std - 1.5) < 1e-8);
}

TEST_CASE("transition moments by substitution") {
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    const auto m = mrs::transition_moments(s, Vector::Constant(1, 2.0), Vector::Zero(1), std::log(2.0));
    CHECK(m.mean[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.std == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("forward sampling at t = 0 returns x0 exactly") {
    const auto s = Schedule::linear(1.0, 5.0, 1.0, 1.0);
    const Vector x0 = Vector::LinSpaced(4, -3.0, 3.0);
    mrs::RandomSource rng(9);
    CHECK(mrs::forward_sample(s, x0, Vector::Ones(4), 0.0, rng) == x0);
}

TEST_CASE("forward sampling reproduces transition moments at Monte Carlo rate") {
    const auto s = Schedule::cosine(0.5, 6.0, 1.3, 1.0);
    const double t = 0.3;
    const Vector x0 = (Vector(3) << 1.0, -2.0, 0.5).finished();
    const Vector mu = (Vector(3) << 0.0, 0.3, -0.1).finished();
    const auto exact = mrs::transition_moments(s, x0, mu, t);

    const int n = 100000;
    mrs::RandomSource rng(2024);
    Vector sum = Vector::Zero(3);
    Vector sum2 = Vector::Zero(3);
    for (int i = 0; i < n; ++i) {
        const Vector x = mrs::forward_sample(s, x0, mu, t, rng);
        sum += x;
        sum2 += x.cwiseProduct(x);
    }
    const Vector mean = sum / n;
    const Vector var = (sum2 / n - mean.cwiseProduct(mean)) * (static_cast<double>(n) / (n - 1));
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(mean[k] - exact.mean[k]) < 4.0 * exact.std / std::sqrt(n));
        CHECK(std::abs(var[k] / (exact.std * exact.std) - 1.0) < 0.05);
    }
}

TEST_CASE("forward sampling is bit-reproducible for a fixed seed") {
    const auto s = Schedule::constant(3.0, 1.0, 1.0);
    mrs::RandomSource a(5, 1);
    mrs::RandomSource b(5, 1);
    for (int i = 0; i < 10; ++i) {
        const Vector xa = mrs::forward_sample(s, Vector::Ones(5), Vector::Zero(5), 0.5, a);
        const Vector xb = mrs::forward_sample(s, Vector::Ones(5), Vector::Zero(5), 0.5, b);
        CHECK(xa == xb);
    }
}

TEST_CASE("forward_from_noise is the reparameterized sample") {
    const auto s = Schedule::constant(2.0, 0.8, 1.0);
    const Vector x0 = Vector::Constant(2, 1.0);
    const Vector mu = Vector::Constant(2, -1.0);
    const Vector z = (Vector(2) << 0.3, -1.2).finished();
    const auto m = mrs::transition_moments(s, x0, mu, 0.4);
    CHECK((mrs::forward_from_noise(s, x0, mu, 0.4, z) - (m.mean + m.std * z)).norm() < 1e-15);
}

TEST_CASE("dimension mismatches are rejected") {
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    mrs::RandomSource rng(1);
    CHECK_THROWS_AS(mrs::transition_moments(s, Vector::Zero(2), Vector::Zero(3), 0.5), mrs::DimensionError);
    CHECK_THROWS_AS(mrs::forward_sample(s, Vector::Zero(2), Vector::Zero(1), 0.5, rng), mrs::DimensionError);
    CHECK_THROWS_AS(mrs::transition_moments(s, Vector::Zero(2), Vector::Zero(2), 1.5), std::domain_error);
}
