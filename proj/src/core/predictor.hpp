// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string_view>
#include <variant>

#include "core/schedule.hpp"
#include "core/types.hpp"

namespace mrs {

enum class Parameterization { Noise, Data, Velocity };

std::string_view to_string(Parameterization kind);

/// A score model in one of the three parameterizations. This is where a
/// trained network would attach; the library only ships analytic oracles.
///
/// The wrapped function must be pure: solvers may replay evaluations.
class Predictor {
public:
    using Fn = std::function<Vector(const Vector& x, const Vector& mu, double t)>;

    Predictor(Parameterization kind, Index dim, Fn fn);

    Parameterization kind() const noexcept { return kind_; }
    Index dim() const noexcept { return dim_; }

    Vector operator()(const Vector& x, const Vector& mu, double t) const;

private:
    Parameterization kind_;
    Index dim_;
    Fn fn_;
};

// Parameterization transforms. All are exact algebraic identities derived
// from the reparameterized forward map x_t = alpha x0 + (1 - alpha) mu + sigma eps.

/// x0 = (x - (1 - alpha) mu - sigma eps) / alpha.
Vector data_from_noise(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& eps);
/// eps = (x - alpha x0 - (1 - alpha) mu) / sigma. Singular at t = 0.
Vector noise_from_data(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& x0_hat);

/// phi_t = arctan(sigma_t / (sigma_inf alpha_t)), so alpha_t = cos phi_t and
/// sigma_t = sigma_inf sin phi_t.
double phi_of_t(const Schedule& s, double t);

Vector data_from_velocity(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& v);
Vector noise_from_velocity(const Schedule& s, const Vector& x, const Vector& mu, double t, const Vector& v);
/// v = dx_t / dphi = mu sin phi - x0 sin phi + sigma_inf cos phi eps.
Vector velocity_from_data_noise(const Schedule& s, const Vector& mu, double t, const Vector& x0, const Vector& eps);

/// Converts the output of `p` into parameterization `target`; evaluation count
/// is preserved (one underlying call per call).
Predictor adapt_predictor(const Schedule& s, const Predictor& p, Parameterization target);

// Analytic oracles.

struct DiracData {
    Vector x0;
};
struct GaussianData {
    Vector m0;
    double s0 = 0.0;
};
struct ConstantNoise {
    Vector c;
};
using OracleSpec = std::variant<DiracData, GaussianData, ConstantNoise>;

Index oracle_dim(const OracleSpec& spec);

/// Exact predictor for the given data model:
///  - DiracData: eps* = (x - alpha x0 - (1 - alpha) mu) / sigma; data form is x0.
///  - GaussianData: x_t ~ N(alpha m0 + (1 - alpha) mu, (sigma^2 + alpha^2 s0^2) I),
///    eps* = -sigma * grad log p_t.
///  - ConstantNoise: eps* = c.
Predictor make_oracle(const Schedule& s, const OracleSpec& spec, Parameterization out_kind);

}  // namespace mrs
