// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/predictor.hpp"

#include <cmath>
#include <stdexcept>

namespace mrs {

std::string_view to_string(Parameterization kind) {
    switch (kind) {
        case Parameterization::Noise: return "noise";
        case Parameterization::Data: return "data";
        case Parameterization::Velocity: return "velocity";
    }
    return "unknown";
}

Predictor::Predictor(Parameterization kind, Index dim, Fn fn) : kind_(kind), dim_(dim), fn_(std::move(fn)) {
    if (dim < 1) throw std::invalid_argument("predictor: dimension must be at least 1");
    if (!fn_) throw std::invalid_argument("predictor: empty evaluation function");
}

Vector Predictor::operator()(const Vector& x, const Vector& mu, double t) const {
    if (x.size() != dim_ || mu.size() != dim_)
        throw DimensionError("predictor: input dimension does not match predictor dimension");
    Vector out = fn_(x, mu, t);
    if (out.size() != dim_) throw DimensionError("predictor: output dimension does not match input dimension");
    return out;
}

Vector data_from_noise(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& eps) {
    require_same_dim(x, mu, "data_from_noise");
    require_same_dim(x, eps, "data_from_noise");
    const double a = s.alpha(t);
    const double sig = s.sigma(t);
    return (x - (1.0 - a) * mu - sig * eps) / a;
}

Vector noise_from_data(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& x0_hat) {
    require_same_dim(x, mu, "noise_from_data");
    require_same_dim(x, x0_hat, "noise_from_data");
    const double sig = s.sigma(t);
    if (!(sig > 0.0)) throw std::domain_error("noise_from_data: sigma_t = 0, noise is undefined at t = 0");
    const double a = s.alpha(t);
    return (x - a * x0_hat - (1.0 - a) * mu) / sig;
}

double phi_of_t(const Schedule& s, double t) { return std::atan2(s.sigma(t), s.sigma_inf() * s.alpha(t)); }

Vector data_from_velocity(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& v) {
    require_same_dim(x, mu, "data_from_velocity");
    require_same_dim(x, v, "data_from_velocity");
    const double phi = phi_of_t(s, t);
    const double c = std::cos(phi);
    return x * c + mu * (1.0 - c) - v * std::sin(phi);
}

Vector noise_from_velocity(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& v) {
    require_same_dim(x, mu, "noise_from_velocity");
    require_same_dim(x, v, "noise_from_velocity");
    const double phi = phi_of_t(s, t);
    const double sn = std::sin(phi);
    return (v * std::cos(phi) + x * sn - mu * sn) / s.sigma_inf();
}

Vector velocity_from_data_noise(const Schedule& s, const Vector& mu, double t, const Vector& x0, const Vector& eps) {
    require_same_dim(mu, x0, "velocity_from_data_noise");
    require_same_dim(mu, eps, "velocity_from_data_noise");
    const double phi = phi_of_t(s, t);
    const double sn = std::sin(phi);
    return mu * sn - x0 * sn + s.sigma_inf() * std::cos(phi) * eps;
}

Predictor adapt_predictor(const Schedule& s, const Predictor& p, Parameterization target) {
    const Parameterization from = p.kind();
    if (from == target) return p;

    auto convert = [s, p, from, target](const Vector& x, const Vector& mu, double t) -> Vector {
        const Vector raw = p(x, mu, t);
        switch (from) {
            case Parameterization::Noise:
                if (target == Parameterization::Data) return data_from_noise(s, x, mu, t, raw);
                return velocity_from_data_noise(s, mu, t, data_from_noise(s, x, mu, t, raw), raw);
            case Parameterization::Data:
                if (target == Parameterization::Noise) return noise_from_data(s, x, mu, t, raw);
                return velocity_from_data_noise(s, mu, t, raw, noise_from_data(s, x, mu, t, raw));
            case Parameterization::Velocity:
                if (target == Parameterization::Data) return data_from_velocity(s, x, mu, t, raw);
                return noise_from_velocity(s, x, mu, t, raw);
        }
        throw std::logic_error("adapt_predictor: unknown parameterization");
    };
    return Predictor(target, p.dim(), convert);
}

Index oracle_dim(const OracleSpec& spec) {
    return std::visit(
        [](const auto& o) -> Index {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, DiracData>) return o.x0.size();
            else if constexpr (std::is_same_v<T, GaussianData>) return o.m0.size();
            else return o.c.size();
        },
        spec);
}

namespace {

Predictor noise_oracle(const Schedule& s, const OracleSpec& spec) {
    const Index dim = oracle_dim(spec);
    return std::visit(
        [&](const auto& o) -> Predictor {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, DiracData>) {
                return Predictor(Parameterization::Noise, dim, [s, x0 = o.x0](const Vector& x, const Vector& mu, double t) {
                    return noise_from_data(s, x, mu, t, x0);
                });
            } else if constexpr (std::is_same_v<T, GaussianData>) {
                return Predictor(Parameterization::Noise, dim,
                                 [s, m0 = o.m0, s0 = o.s0](const Vector& x, const Vector& mu, double t) -> Vector {
                                     const double a = s.alpha(t);
                                     const double sig = s.sigma(t);
                                     const double var = sig * sig + a * a * s0 * s0;
                                     if (!(var > 0.0))
                                         throw std::domain_error("gaussian oracle: marginal variance is zero");
                                     return sig * (x - a * m0 - (1.0 - a) * mu) / var;
                                 });
            } else {
                return Predictor(Parameterization::Noise, dim,
                                 [c = o.c](const Vector&, const Vector&, double) { return c; });
            }
        },
        spec);
}

}  // namespace

Predictor make_oracle(const Schedule& s, const OracleSpec& spec, Parameterization out_kind) {
    const Index dim = oracle_dim(spec);
    if (dim < 1) throw std::invalid_argument("make_oracle: oracle parameters must have dimension >= 1");
    if (const auto* g = std::get_if<GaussianData>(&spec); g && !(g->s0 >= 0.0 && std::isfinite(g->s0)))
        throw std::invalid_argument("make_oracle: gaussian s0 must be nonnegative and finite");

    if (const auto* d = std::get_if<DiracData>(&spec); d && out_kind == Parameterization::Data) {
        return Predictor(Parameterization::Data, dim, [x0 = d->x0](const Vector&, const Vector&, double) { return x0; });
    }
    return adapt_predictor(s, noise_oracle(s, spec), out_kind);
}

}  // namespace mrs
