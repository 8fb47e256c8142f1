// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/sampler.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mrs {

std::string_view to_string(SolverFamily family) {
    switch (family) {
        case SolverFamily::MrSde: return "mr_sde";
        case SolverFamily::MrOde: return "mr_ode";
        case SolverFamily::Posterior: return "posterior";
        case SolverFamily::EulerMaruyama: return "euler_maruyama";
    }
    return "unknown";
}

std::string solver_name(const SamplerSpec& spec) {
    std::string name(to_string(spec.family));
    if (spec.family == SolverFamily::MrSde || spec.family == SolverFamily::MrOde) {
        name += spec.parameterization == Parameterization::Noise ? "_n_" : "_d_";
        name += std::to_string(spec.order);
    }
    return name;
}

Parameterization solver_input(const SamplerSpec& spec) {
    if (spec.family == SolverFamily::Posterior || spec.family == SolverFamily::EulerMaruyama)
        return Parameterization::Noise;
    return spec.parameterization;
}

void validate(const SamplerSpec& spec) {
    const bool mr = spec.family == SolverFamily::MrSde || spec.family == SolverFamily::MrOde;
    if (mr) {
        if (spec.order != 1 && spec.order != 2) throw std::invalid_argument("sampler: order must be 1 or 2");
        if (spec.parameterization == Parameterization::Velocity)
            throw std::invalid_argument("sampler: MR solvers take noise or data parameterization");
    }
    const auto& times = spec.grid.times;
    if (times.size() < 2) throw std::invalid_argument("sampler: grid needs at least one step");
    if (mr && spec.order == 2 && times.size() < 3)
        throw std::invalid_argument("sampler: order 2 needs a grid of at least two steps");
    if (!(times.back() > 0.0)) throw std::invalid_argument("sampler: terminal time must be positive");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] < times[i - 1])) throw std::invalid_argument("sampler: grid must be strictly decreasing");
    if (spec.denoise_final && solver_input(spec) != Parameterization::Data)
        throw std::invalid_argument("sampler: denoise_final applies to data-parameterized MR solvers only");
}

namespace {

struct StepScalars {
    double alpha_prev;
    double alpha_next;
    double alpha_ratio;  // alpha_next / alpha_prev
    double sigma_prev;
    double sigma_next;
    double h;
};

StepScalars step_scalars(const Schedule& s, double t_prev, double t_next) {
    if (!(t_next < t_prev)) {
        std::ostringstream os;
        os << "step: t_next = " << t_next << " must be below t_prev = " << t_prev;
        throw std::invalid_argument(os.str());
    }
    StepScalars c{};
    c.alpha_prev = s.alpha(t_prev);
    c.alpha_next = s.alpha(t_next);
    c.alpha_ratio = std::exp(s.theta_integral(t_prev) - s.theta_integral(t_next));
    c.sigma_prev = s.sigma(t_prev);
    c.sigma_next = s.sigma(t_next);
    c.h = s.lambda(t_next) - s.lambda(t_prev);
    if (!(c.h > 0.0)) throw std::invalid_argument("step: nonpositive log-SNR step h (grid bug)");
    return c;
}

void check_dims(const StateVec& prev, const Vector& out, const Vector* extra, const char* where) {
    require_same_dim(prev.x, prev.mu, where);
    require_same_dim(prev.x, out, where);
    if (extra) require_same_dim(prev.x, *extra, where);
}

Vector backward_difference(const Vector& newer, const Vector& older, double h_prev) {
    require_same_dim(newer, older, "backward_difference");
    if (!(h_prev > 0.0)) throw std::invalid_argument("order-2 step: h_prev must be positive");
    return (newer - older) / h_prev;
}

// Noise-prediction update shared by the SDE and ODE variants. `noise_scale`
// is 2 for the SDE and 1 for the PF-ODE.
Vector noise_update(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps, const Vector* deriv,
                    const Vector* z) {
    check_dims(prev, eps, z, "noise step");
    const StepScalars c = step_scalars(s, prev.t, t_next);
    const double e1 = std::expm1(c.h);
    Vector model = e1 * eps;
    if (deriv) model += (e1 - c.h) * (*deriv);
    const double weight = z ? 2.0 * c.sigma_next : c.sigma_next;
    Vector x = c.alpha_ratio * prev.x + (1.0 - c.alpha_ratio) * prev.mu - weight * model;
    if (z) x += c.sigma_next * std::sqrt(std::expm1(2.0 * c.h)) * (*z);
    return x;
}

Vector data_sde_update(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0, const Vector* deriv,
                       const Vector& z) {
    check_dims(prev, x0, &z, "data sde step");
    const StepScalars c = step_scalars(s, prev.t, t_next);
    const double e2 = std::exp(-2.0 * c.h);
    const double one_minus_e2 = -std::expm1(-2.0 * c.h);
    const double x_coef = (c.sigma_next / c.sigma_prev) * std::exp(-c.h);
    const double mu_coef = 1.0 - c.alpha_ratio * e2 - c.alpha_next + c.alpha_next * e2;
    Vector model = c.alpha_next * one_minus_e2 * x0;
    if (deriv) model += c.alpha_next * (c.h - 0.5 * one_minus_e2) * (*deriv);
    return x_coef * prev.x + mu_coef * prev.mu + model + c.sigma_next * std::sqrt(one_minus_e2) * z;
}

Vector data_ode_update(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0, const Vector* deriv) {
    check_dims(prev, x0, nullptr, "data ode step");
    const StepScalars c = step_scalars(s, prev.t, t_next);
    const double r = c.sigma_next / c.sigma_prev;
    const double mu_coef = 1.0 - r + r * c.alpha_prev - c.alpha_next;
    const double em1 = std::expm1(-c.h);  // e^{-h} - 1
    Vector model = c.alpha_next * (-em1) * x0;
    if (deriv) model += c.alpha_next * (c.h + em1) * (*deriv);
    return r * prev.x + mu_coef * prev.mu + model;
}

}  // namespace

Vector step_sde_noise_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev, const Vector& z) {
    return noise_update(s, prev, t_next, eps_prev, nullptr, &z);
}

Vector step_sde_noise_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev,
                        const Vector& eps_prev2, double h_prev, const Vector& z) {
    const Vector d = backward_difference(eps_prev, eps_prev2, h_prev);
    return noise_update(s, prev, t_next, eps_prev, &d, &z);
}

Vector step_ode_noise_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev) {
    return noise_update(s, prev, t_next, eps_prev, nullptr, nullptr);
}

Vector step_ode_noise_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev,
                        const Vector& eps_prev2, double h_prev) {
    const Vector d = backward_difference(eps_prev, eps_prev2, h_prev);
    return noise_update(s, prev, t_next, eps_prev, &d, nullptr);
}

Vector step_sde_data_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev, const Vector& z) {
    return data_sde_update(s, prev, t_next, x0_prev, nullptr, z);
}

Vector step_sde_data_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev,
                       const Vector& x0_prev2, double h_prev, const Vector& z) {
    const Vector d = backward_difference(x0_prev, x0_prev2, h_prev);
    return data_sde_update(s, prev, t_next, x0_prev, &d, z);
}

Vector step_ode_data_1(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev) {
    return data_ode_update(s, prev, t_next, x0_prev, nullptr);
}

Vector step_ode_data_2(const Schedule& s, const StateVec& prev, double t_next, const Vector& x0_prev,
                       const Vector& x0_prev2, double h_prev) {
    const Vector d = backward_difference(x0_prev, x0_prev2, h_prev);
    return data_ode_update(s, prev, t_next, x0_prev, &d);
}

PosteriorCoefficients posterior_coefficients(const Schedule& s, double t_prev, double t_next) {
    if (!(t_next < t_prev)) throw std::invalid_argument("posterior step: t_next must be below t_prev");
    // Index i is the current (later) time, i-1 the next (earlier) one.
    const double a_i = s.alpha(t_prev);
    const double a_im1 = s.alpha(t_next);
    const double one_minus_ai_sq = s.one_minus_alpha_sq(t_prev);
    const double one_minus_aim1_sq = s.one_minus_alpha_sq(t_next);
    const double one_minus_ratio_sq = -std::expm1(-2.0 * (s.theta_integral(t_prev) - s.theta_integral(t_next)));

    PosteriorCoefficients c;
    c.state = one_minus_aim1_sq * a_i / (one_minus_ai_sq * a_im1);
    c.data = one_minus_ratio_sq * a_im1 / one_minus_ai_sq;
    c.beta = one_minus_aim1_sq * one_minus_ratio_sq / one_minus_ai_sq;
    return c;
}

Vector step_posterior(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev, const Vector& z) {
    check_dims(prev, eps_prev, &z, "posterior step");
    const PosteriorCoefficients c = posterior_coefficients(s, prev.t, t_next);
    if (c.beta < 0.0) throw std::domain_error("posterior step: negative posterior variance");
    const double a_i = s.alpha(prev.t);
    const Vector x0 = (prev.x - prev.mu - s.sigma(prev.t) * eps_prev) / a_i + prev.mu;
    const Vector mean = c.state * (prev.x - prev.mu) + c.data * (x0 - prev.mu) + prev.mu;
    return mean + s.sigma_inf() * std::sqrt(c.beta) * z;
}

Vector step_euler_maruyama(const Schedule& s, const StateVec& prev, double t_next, const Vector& eps_prev,
                           const Vector& z) {
    check_dims(prev, eps_prev, &z, "euler-maruyama step");
    if (!(t_next < prev.t)) throw std::invalid_argument("euler-maruyama step: t_next must be below t_prev");
    const double dt = prev.t - t_next;
    const double f = s.theta(prev.t);
    const double g2 = s.g_squared(prev.t);
    const double sig = s.sigma(prev.t);
    if (!(sig > 0.0)) throw std::domain_error("euler-maruyama step: sigma_t = 0");
    return prev.x + f * dt * (prev.x - prev.mu) - (g2 / sig) * dt * eps_prev + std::sqrt(g2 * dt) * z;
}

std::size_t noise_count(const SamplerSpec& spec) {
    return is_stochastic(spec.family) ? spec.grid.nfe() : 0;
}

Trajectory run_with_noise(const SamplerSpec& spec, const Schedule& s, const Predictor& predictor, const Vector& mu,
                          const Vector& x_T, std::span<const Vector> noise) {
    validate(spec);
    const auto& times = spec.grid.times;
    if (times.front() != s.t_max()) throw std::invalid_argument("sampler: grid must start at the schedule horizon T");
    if (mu.size() != predictor.dim() || x_T.size() != predictor.dim())
        throw DimensionError("sampler: mu / x_T dimension does not match the predictor");
    const std::size_t steps = spec.grid.nfe();
    if (noise.size() != noise_count(spec))
        throw std::invalid_argument("sampler: expected " + std::to_string(noise_count(spec)) + " noise vectors, got " +
                                    std::to_string(noise.size()));

    const Predictor model = adapt_predictor(s, predictor, solver_input(spec));
    const bool second_order = (spec.family == SolverFamily::MrSde || spec.family == SolverFamily::MrOde) &&
                              spec.order == 2;

    Trajectory traj;
    traj.states.reserve(steps + 1);
    traj.model_outputs.reserve(steps);
    traj.states.push_back({times[0], x_T});

    auto evaluate = [&](const Vector& x, double t) {
        Vector out = model(x, mu, t);
        ++traj.nfe;
        return out;
    };

    Vector x = x_T;
    traj.model_outputs.push_back({times[0], evaluate(x, times[0])});

    for (std::size_t i = 1; i <= steps; ++i) {
        const StateVec prev{x, mu, times[i - 1]};
        const double t_next = times[i];
        const Vector& q = traj.model_outputs[i - 1].value;
        const bool use_history = second_order && i >= 2;
        const Vector* q_older = use_history ? &traj.model_outputs[i - 2].value : nullptr;
        const double h_prev = use_history ? s.lambda(times[i - 1]) - s.lambda(times[i - 2]) : 0.0;
        const Vector* z = is_stochastic(spec.family) ? &noise[i - 1] : nullptr;

        switch (spec.family) {
            case SolverFamily::MrSde:
                if (spec.parameterization == Parameterization::Noise)
                    x = use_history ? step_sde_noise_2(s, prev, t_next, q, *q_older, h_prev, *z)
                                    : step_sde_noise_1(s, prev, t_next, q, *z);
                else
                    x = use_history ? step_sde_data_2(s, prev, t_next, q, *q_older, h_prev, *z)
                                    : step_sde_data_1(s, prev, t_next, q, *z);
                break;
            case SolverFamily::MrOde:
                if (spec.parameterization == Parameterization::Noise)
                    x = use_history ? step_ode_noise_2(s, prev, t_next, q, *q_older, h_prev)
                                    : step_ode_noise_1(s, prev, t_next, q);
                else
                    x = use_history ? step_ode_data_2(s, prev, t_next, q, *q_older, h_prev)
                                    : step_ode_data_1(s, prev, t_next, q);
                break;
            case SolverFamily::Posterior:
                x = step_posterior(s, prev, t_next, q, *z);
                break;
            case SolverFamily::EulerMaruyama:
                x = step_euler_maruyama(s, prev, t_next, q, *z);
                break;
        }
        if (!x.allFinite())
            throw NumericalError("sampler: non-finite state at step " + std::to_string(i), i);
        traj.states.push_back({t_next, x});
        if (i < steps) traj.model_outputs.push_back({t_next, evaluate(x, t_next)});
    }

    traj.final = spec.denoise_final ? evaluate(x, times.back()) : x;
    if (!traj.final.allFinite()) throw NumericalError("sampler: non-finite final output", steps);
    return traj;
}

Trajectory run(const SamplerSpec& spec, const Schedule& s, const Predictor& predictor, const Vector& mu,
               RandomSource& rng) {
    validate(spec);
    const Index dim = predictor.dim();
    if (mu.size() != dim) throw DimensionError("sampler: mu dimension does not match the predictor");
    const Vector x_T = mu + s.sigma_inf() * rng.normal_vector(dim);
    std::vector<Vector> noise;
    const std::size_t count = noise_count(spec);
    noise.reserve(count);
    for (std::size_t i = 0; i < count; ++i) noise.push_back(rng.normal_vector(dim));
    return run_with_noise(spec, s, predictor, mu, x_T, noise);
}

Trajectory run(const SamplerSpec& spec, const Schedule& s, const Predictor& predictor, const Vector& mu) {
    RandomSource rng(spec.seed, spec.chain);
    return run(spec, s, predictor, mu, rng);
}

std::vector<Vector> coarsen_noise(const Schedule& s, const SamplerSpec& fine_spec, std::span<const Vector> fine_noise,
                                  std::size_t stride) {
    const auto& times = fine_spec.grid.times;
    const std::size_t steps = fine_spec.grid.nfe();
    if (stride == 0 || steps % stride != 0)
        throw std::invalid_argument("coarsen_noise: stride must divide the fine step count");
    if (!is_stochastic(fine_spec.family)) return {};
    if (fine_noise.size() != steps) throw std::invalid_argument("coarsen_noise: one noise vector per fine step expected");

    const bool mr = fine_spec.family == SolverFamily::MrSde;
    const bool data_form = mr && fine_spec.parameterization == Parameterization::Data;

    std::vector<Vector> coarse;
    coarse.reserve(steps / stride);
    for (std::size_t j = 0; j < steps / stride; ++j) {
        const double t_c = times[(j + 1) * stride];
        Vector acc = Vector::Zero(fine_noise[0].size());
        double total = 0.0;
        for (std::size_t k = j * stride + 1; k <= (j + 1) * stride; ++k) {
            const double t_k = times[k];
            double w = 0.0;
            if (mr) {
                const double h = s.lambda(t_k) - s.lambda(times[k - 1]);
                const double sig_k = s.sigma(t_k);
                if (data_form) {
                    // propagator (sigma_c^2 alpha_k) / (sigma_k^2 alpha_c)
                    const double sig_c = s.sigma(t_c);
                    const double prop = (sig_c * sig_c) / (sig_k * sig_k) *
                                        std::exp(s.theta_integral(t_c) - s.theta_integral(t_k));
                    w = prop * sig_k * std::sqrt(-std::expm1(-2.0 * h));
                } else {
                    const double prop = std::exp(s.theta_integral(t_k) - s.theta_integral(t_c));
                    w = prop * sig_k * std::sqrt(std::expm1(2.0 * h));
                }
            } else {
                w = std::sqrt(times[k - 1] - t_k);
            }
            acc += w * fine_noise[k - 1];
            total += w * w;
        }
        coarse.push_back(acc / std::sqrt(total));
    }
    return coarse;
}

GaussianMoments dirac_terminal_moments(const Schedule& s, bool stochastic, const Vector& x0, const Vector& mu,
                                       double t_end) {
    require_same_dim(x0, mu, "dirac_terminal_moments");
    const double t_max = s.t_max();
    const double a_T = s.alpha(t_max);
    const double a_e = s.alpha(t_end);
    const double sig_T = s.sigma(t_max);
    const double sig_e = s.sigma(t_end);
    const double h = s.lambda(t_end) - s.lambda(t_max);
    const double var_T = s.sigma_inf() * s.sigma_inf();

    GaussianMoments m;
    if (stochastic) {
        const double e2 = std::exp(-2.0 * h);
        const double a = (sig_e / sig_T) * std::exp(-h);
        m.mean = a * mu + mu * (1.0 - (a_e / a_T) * e2 - a_e + a_e * e2) + a_e * (1.0 - e2) * x0;
        m.var = Vector::Constant(mu.size(), a * a * var_T + sig_e * sig_e * (1.0 - e2));
    } else {
        const double a = sig_e / sig_T;
        m.mean = a * mu + mu * (1.0 - a + a * a_T - a_e) + a_e * (1.0 - std::exp(-h)) * x0;
        m.var = Vector::Constant(mu.size(), a * a * var_T);
    }
    return m;
}

}  // namespace mrs
