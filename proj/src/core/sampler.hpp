// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "core/predictor.hpp"
#include "core/process.hpp"
#include "core/random.hpp"
#include "core/schedule.hpp"

namespace mrs {

enum class SolverFamily { MrSde, MrOde, Posterior, EulerMaruyama };

std::string_view to_string(SolverFamily family);

inline bool is_stochastic(SolverFamily family) { return family != SolverFamily::MrOde; }

struct SamplerSpec {
    SolverFamily family = SolverFamily::MrSde;
    /// Noise or Data for the MR families; Posterior and EulerMaruyama always
    /// consume noise predictions.
    Parameterization parameterization = Parameterization::Data;
    int order = 1;
    TimeGrid grid;
    std::uint64_t seed = 0;
    /// Stream index of this chain under `seed`.
    std::uint64_t chain = 0;
    /// Return the last data prediction x_theta(x_{t_M}, t_M) instead of
    /// x_{t_M}. Costs one extra evaluation; data-parameterized MR runs only.
    bool denoise_final = false;
};

/// Human-readable solver name, e.g. "mr_sde_d_2" or "posterior".
std::string solver_name(const SamplerSpec& spec);

/// Parameterization the solver consumes.
Parameterization solver_input(const SamplerSpec& spec);

void validate(const SamplerSpec& spec);

struct TimedVector {
    double t = 0.0;
    Vector value;
};

struct Trajectory {
    std::vector<TimedVector> states;         // (t_i, x_{t_i}), i = 0..M
    std::vector<TimedVector> model_outputs;  // buffered predictor outputs, one per step
    Vector final;
    std::size_t nfe = 0;
};

// Single steps. Each maps x_prev at x_prev.t to t_next < x_prev.t with
// h = lambda(t_next) - lambda(x_prev.t) > 0; a nonpositive h throws.
// Order-2 variants take the two most recent buffered outputs and the previous
// log-SNR step h_prev, and apply D = (out_prev - out_prev2) / h_prev.

Vector step_sde_noise_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev, const Vector& z);
Vector step_sde_noise_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev,
                        const Vector& eps_prev2, double h_prev, const Vector& z);
Vector step_ode_noise_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev);
Vector step_ode_noise_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev,
                        const Vector& eps_prev2, double h_prev);
Vector step_sde_data_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev, const Vector& z);
Vector step_sde_data_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev,
                       const Vector& x0_prev2, double h_prev, const Vector& z);
Vector step_ode_data_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev);
Vector step_ode_data_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev,
                       const Vector& x0_prev2, double h_prev);

/// Ancestral step from the Gaussian posterior p(x_next | x_prev, x0) with x0
/// reconstructed from eps_prev; the noise scale is sigma_inf sqrt(beta~).
Vector step_posterior(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev, const Vector& z);

/// Euler-Maruyama step of the reverse SDE with drift and diffusion frozen at
/// x_prev.t.
Vector step_euler_maruyama(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev,
                           const Vector& z);

struct PosteriorCoefficients {
    double state = 0.0;  // multiplies (x - mu)
    double data = 0.0;   // multiplies (x0 - mu)
    double beta = 0.0;   // beta~, before the sigma_inf^2 factor
};
PosteriorCoefficients posterior_coefficients(const Schedule& s, double t_prev, double t_next);

/// Number of standard-normal vectors a run consumes after x_T.
std::size_t noise_count(const SamplerSpec& spec);

/// Runs the solver from a given x_T with the supplied per-step noise
/// (noise_count(spec) vectors, consumed in grid order).
Trajectory run_with_noise(const SamplerSpec& spec, const Schedule& s, const Predictor& predictor, const Vector& mu,
                          const Vector& x_T, std::span<const Vector> noise);

/// Draws x_T = mu + sigma_inf z_0 and then one z per stochastic step from `rng`.
Trajectory run(const SamplerSpec& spec, const Schedule& s, const Predictor& predictor, const Vector& mu,
               RandomSource& rng);

/// As above with RandomSource(spec.seed, spec.chain).
Trajectory run(const SamplerSpec& spec, const Schedule& s, const Predictor& predictor, const Vector& mu);

/// Aggregates fine-grid noise into the noise of a grid that keeps every
/// `stride`-th point, so both runs see the same Brownian path. The weights
/// follow the family's exact linear propagator (MR families) or Brownian
/// increments sqrt(dt) (Posterior, EulerMaruyama).
std::vector<Vector> coarsen_noise(const Schedule& s, const SamplerSpec& fine_spec, std::span<const Vector> fine_noise,
                                  std::size_t stride);

struct GaussianMoments {
    Vector mean;
    Vector var;
};

/// Exact terminal moments of the reverse SDE (stochastic) or PF-ODE for a
/// point-mass data distribution at x0, started from x_T ~ N(mu, sigma_inf^2 I)
/// at T and stopped at t_end, i.e. the single-jump closed-form solutions with
/// a constant data prediction.
GaussianMoments dirac_terminal_moments(const Schedule& s, bool stochastic, const Vector& x0, const Vector& mu,
                                       double t_end);

}  // namespace mrs
