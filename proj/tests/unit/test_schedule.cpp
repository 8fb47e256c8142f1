// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "core/schedule.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using mrs::Schedule;

namespace {

std::vector<Schedule> families() {
    return {Schedule::constant(4.0, 1.0, 1.0), Schedule::linear(1.0, 8.0, 0.7, 1.0),
            Schedule::cosine(0.5, 6.0, 1.3, 2.0)};
}

std::vector<double> random_times(const Schedule& s, std::size_t n, std::uint64_t seed, double lo_frac = 1e-4) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(lo_frac * s.t_max(), s.t_max());
    std::vector<double> t(n);
    for (auto& x : t) x = u(gen);
    return t;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("alpha at the origin and a known point") {
    for (const auto& s : families()) CHECK(s.alpha(0.0) == 1.0);
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    CHECK(s.alpha(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closed-form integral matches quadrature for every family") {
    for (const auto& s : families()) {
        for (double frac : {0.1, 0.37, 0.5, 0.93, 1.0}) {
            const double t = frac * s.t_max();
            CHECK(s.alpha(t) == doctest::Approx(oracle::alpha(s, t)).epsilon(1e-8));
        }
    }
    const auto cos_s = Schedule::cosine(0.5, 6.0, 1.3, 2.0);
    CHECK(std::abs(cos_s.alpha(1.0) - oracle::alpha(cos_s, 1.0)) < 1e-8);
}

TEST_CASE("sigma endpoints and substitution") {
    for (const auto& s : families()) CHECK(s.sigma(0.0) == 0.0);
    const auto wide = Schedule::constant(1.0, 2.0, 50.0);
    CHECK(std::abs(wide.sigma(50.0) - 2.0) < 1e-8);
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    CHECK(s.sigma(std::log(2.0)) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("time outside [0, T] is a domain error") {
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    CHECK_THROWS_AS(s.alpha(-1e-9), std::domain_error);
    CHECK_THROWS_AS(s.sigma(1.0 + 1e-9), std::domain_error);
    CHECK_THROWS_AS(s.theta(2.0), std::domain_error);
    CHECK_THROWS_AS(s.g_squared(-1.0), std::domain_error);
    CHECK_THROWS_AS(s.lambda(0.0), std::domain_error);
    CHECK_THROWS_AS(s.lambda(1.5), std::domain_error);
}

TEST_CASE("lambda at a known point and monotonicity") {
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    CHECK(s.lambda(std::log(2.0)) == doctest::Approx(std::log(0.5 / std::sqrt(0.75))).epsilon(1e-14));
    CHECK(s.lambda(0.2) > s.lambda(0.3));
}

TEST_CASE("alpha, sigma and lambda are strictly monotone on 1000 sorted samples") {
    for (const auto& s : families()) {
        auto t = random_times(s, 1000, 11);
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        for (std::size_t i = 1; i < t.size(); ++i) {
            CHECK(s.alpha(t[i]) < s.alpha(t[i - 1]));
            CHECK(s.sigma(t[i]) > s.sigma(t[i - 1]));
            CHECK(s.lambda(t[i]) < s.lambda(t[i - 1]));
        }
    }
}

TEST_CASE("g^2 = 2 sigma_inf^2 f and the variance identity hold for 1000 random t") {
    for (const auto& s : families()) {
        const double si2 = s.sigma_inf() * s.sigma_inf();
        for (double t : random_times(s, 1000, 12, 0.0)) {
            CHECK(rel(s.g_squared(t), 2.0 * si2 * s.theta(t)) < 1e-12);
            const double a = s.alpha(t);
            const double sg = s.sigma(t);
            CHECK(rel(sg * sg + si2 * a * a, si2) < 1e-12);
        }
    }
}

TEST_CASE("g^2 examples") {
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    for (double t : {0.0, 0.3, 1.0}) CHECK(s.g_squared(t) == 2.0);
    CHECK(Schedule::constant(2.0, 0.5, 1.0).g_squared(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("g^2 equals -2 sigma^2 dlambda/dt by central differences") {
    for (const auto& s : families()) {
        for (double frac : {0.05, 0.2, 0.5, 0.8, 0.95}) {
            const double t = frac * s.t_max();
            const double dt = 1e-6 * s.t_max();
            const double dlam = (s.lambda(t + dt) - s.lambda(t - dt)) / (2.0 * dt);
            const double sg = s.sigma(t);
            CHECK(rel(-2.0 * sg * sg * dlam, s.g_squared(t)) < 1e-6);
        }
    }
}

TEST_CASE("lambda and t round trip in both directions") {
    for (const auto& s : families()) {
        for (double t : random_times(s, 1000, 13, 1e-3)) CHECK(rel(s.t_of_lambda(s.lambda(t)), t) < 1e-9);
        const double lo = s.lambda(s.t_max());
        const double hi = s.lambda(1e-3 * s.t_max());
        std::mt19937_64 gen(14);
        std::uniform_real_distribution<double> u(lo, hi);
        for (int i = 0; i < 1000; ++i) {
            const double lam = u(gen);
            CHECK(std::abs(s.lambda(s.t_of_lambda(lam)) - lam) < 1e-9);
        }
    }
}

TEST_CASE("t_of_lambda examples and boundaries") {
    const auto s = Schedule::constant(1.0, 1.0, 1.0);
    CHECK(std::abs(s.t_of_lambda(s.lambda(0.3)) - 0.3) < 1e-9);
    for (const auto& f : families()) CHECK(f.t_of_lambda(f.lambda(f.t_max())) == f.t_max());

    const auto lin = Schedule::linear(1.0, 8.0, 0.7, 1.0);
    std::mt19937_64 gen(15);
    std::uniform_real_distribution<double> u(lin.lambda(1.0), lin.lambda(1e-4));
    for (int i = 0; i < 20; ++i) {
        const double lam = u(gen);
        CHECK(std::abs(lin.lambda(lin.t_of_lambda(lam)) - lam) < 1e-10);
    }
    CHECK_THROWS_AS(s.t_of_lambda(s.lambda(1.0) - 1.0), std::range_error);
    CHECK_THROWS_AS(s.t_of_lambda(std::numeric_limits<double>::quiet_NaN()), std::range_error);
    CHECK_THROWS_AS(s.t_of_lambda(std::numeric_limits<double>::infinity()), std::range_error);
}

TEST_CASE("schedule parameters are validated") {
    CHECK_THROWS_AS(Schedule::constant(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::constant(1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::constant(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::linear(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::cosine(1.0, std::nan(""), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("cosine family rate follows its shape") {
    const auto s = Schedule::cosine(0.5, 6.0, 1.0, 2.0);
    CHECK(s.theta(0.0) == doctest::Approx(0.5));
    CHECK(s.theta(1.0) == doctest::Approx(3.25));
    CHECK(s.theta(2.0) == doctest::Approx(6.0));
}

TEST_CASE("make_grid shapes") {
    const auto s = Schedule::constant(4.0, 1.0, 1.0);
    const auto one = mrs::make_grid(s, 1, mrs::Spacing::UniformLambda, 0.01);
    REQUIRE(one.times.size() == 2);
    CHECK(one.times[0] == 1.0);
    CHECK(one.times[1] == 0.01);
    CHECK(one.nfe() == 1);

    const auto ut = mrs::make_grid(s, 5, mrs::Spacing::UniformT, 0.01);
    REQUIRE(ut.times.size() == 6);
    for (std::size_t i = 1; i < 6; ++i) CHECK(std::abs((ut.times[i - 1] - ut.times[i]) - 0.198) < 1e-12);
}

TEST_CASE("uniform-lambda grids have equal log-SNR steps") {
    for (const auto& s : families()) {
        for (std::size_t nfe : {10, 37, 200}) {
            const double t_end = mrs::default_t_end(s);
            const auto g = mrs::make_grid(s, nfe, mrs::Spacing::UniformLambda, t_end);
            REQUIRE(g.times.size() == nfe + 1);
            CHECK(g.times.front() == s.t_max());
            CHECK(g.times.back() == t_end);
            const double h_mean = (s.lambda(t_end) - s.lambda(s.t_max())) / static_cast<double>(nfe);
            for (std::size_t i = 1; i <= nfe; ++i) {
                CHECK(g.times[i] < g.times[i - 1]);
                CHECK(std::abs(s.lambda(g.times[i]) - s.lambda(g.times[i - 1]) - h_mean) < 1e-9);
            }
        }
    }
}

TEST_CASE("make_grid rejects bad arguments") {
    const auto s = Schedule::constant(4.0, 1.0, 1.0);
    CHECK_THROWS_AS(mrs::make_grid(s, 0, mrs::Spacing::UniformT, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(mrs::make_grid(s, 5, mrs::Spacing::UniformT, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mrs::make_grid(s, 5, mrs::Spacing::UniformLambda, 0.0), std::invalid_argument);
}

TEST_CASE("subsample_grid keeps every stride-th time") {
    const auto s = Schedule::linear(1.0, 8.0, 0.7, 1.0);
    const auto fine = mrs::make_grid(s, 40, mrs::Spacing::UniformLambda, 1e-3);
    const auto coarse = mrs::subsample_grid(fine, 8);
    REQUIRE(coarse.nfe() == 5);
    for (std::size_t i = 0; i <= 5; ++i) CHECK(coarse.times[i] == fine.times[8 * i]);
    // On a uniform-lambda grid the subsample is itself uniform in lambda.
    const auto direct = mrs::make_grid(s, 5, mrs::Spacing::UniformLambda, 1e-3);
    for (std::size_t i = 0; i <= 5; ++i) CHECK(rel(coarse.times[i], direct.times[i]) < 1e-9);
    CHECK_THROWS_AS(mrs::subsample_grid(fine, 3), std::invalid_argument);
}
