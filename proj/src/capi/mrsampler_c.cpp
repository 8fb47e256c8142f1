// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrsampler/mrsampler.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/predictor.hpp"
#include "core/process.hpp"
#include "core/sampler.hpp"
#include "core/schedule.hpp"

struct mrs_schedule {
    mrs::Schedule value;
};

struct mrs_predictor {
    mrs::Predictor value;
};

struct mrs_trajectory {
    mrs::Trajectory value;
};

struct mrs_pca {
    mrs::PcaBasis value;
};

namespace {

thread_local std::string g_last_error;

class CallbackError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

mrs_status fail(mrs_status status, const char* message) {
    g_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
mrs_status guarded(F&& body) {
    try {
        body();
        return MRS_OK;
    } catch (const mrs::NumericalError& e) {
        return fail(MRS_ERR_NUMERICAL, e.what());
    } catch (const mrs::DimensionError& e) {
        return fail(MRS_ERR_DIMENSION, e.what());
    } catch (const CallbackError& e) {
        return fail(MRS_ERR_CALLBACK, e.what());
    } catch (const std::domain_error& e) {
        return fail(MRS_ERR_DOMAIN, e.what());
    } catch (const std::range_error& e) {
        return fail(MRS_ERR_RANGE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(MRS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MRS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MRS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(MRS_ERR_INTERNAL, "unknown error");
    }
}

void require(bool cond, const char* message) {
    if (!cond) throw std::invalid_argument(message);
}

mrs::Vector to_vector(const double* data, std::size_t dim) {
    require(data != nullptr || dim == 0, "null vector argument");
    return Eigen::Map<const mrs::Vector>(data, static_cast<mrs::Index>(dim));
}

void write_vector(const mrs::Vector& v, double* out) {
    require(out != nullptr, "null output buffer");
    Eigen::Map<mrs::Vector>(out, v.size()) = v;
}

mrs::Parameterization to_cpp(mrs_parameterization p) {
    switch (p) {
        case MRS_PARAM_NOISE: return mrs::Parameterization::Noise;
        case MRS_PARAM_DATA: return mrs::Parameterization::Data;
        case MRS_PARAM_VELOCITY: return mrs::Parameterization::Velocity;
    }
    throw std::invalid_argument("unknown parameterization");
}

mrs_parameterization to_c(mrs::Parameterization p) {
    switch (p) {
        case mrs::Parameterization::Noise: return MRS_PARAM_NOISE;
        case mrs::Parameterization::Data: return MRS_PARAM_DATA;
        case mrs::Parameterization::Velocity: return MRS_PARAM_VELOCITY;
    }
    return MRS_PARAM_NOISE;
}

mrs::Spacing to_cpp(mrs_spacing s) {
    switch (s) {
        case MRS_SPACING_UNIFORM_T: return mrs::Spacing::UniformT;
        case MRS_SPACING_UNIFORM_LAMBDA: return mrs::Spacing::UniformLambda;
    }
    throw std::invalid_argument("unknown spacing");
}

mrs::SolverFamily to_cpp(mrs_solver_family f) {
    switch (f) {
        case MRS_SOLVER_MR_SDE: return mrs::SolverFamily::MrSde;
        case MRS_SOLVER_MR_ODE: return mrs::SolverFamily::MrOde;
        case MRS_SOLVER_POSTERIOR: return mrs::SolverFamily::Posterior;
        case MRS_SOLVER_EULER_MARUYAMA: return mrs::SolverFamily::EulerMaruyama;
    }
    throw std::invalid_argument("unknown solver family");
}

mrs::SamplerSpec to_cpp(const mrs_schedule* schedule, const mrs_sampler_spec* spec, const double* times) {
    require(schedule && spec, "null schedule or spec");
    mrs::SamplerSpec out;
    out.family = to_cpp(spec->family);
    out.parameterization = to_cpp(spec->parameterization);
    out.order = spec->order;
    out.seed = spec->seed;
    out.chain = spec->chain;
    out.denoise_final = spec->denoise_final != 0;
    const double t_end = spec->t_end > 0.0 ? spec->t_end : mrs::default_t_end(schedule->value);
    if (times) {
        require(spec->nfe >= 1, "nfe must be at least 1");
        out.grid.times.assign(times, times + spec->nfe + 1);
        out.grid.spacing = to_cpp(spec->spacing);
        out.grid.t_end = out.grid.times.back();
    } else {
        out.grid = mrs::make_grid(schedule->value, spec->nfe, to_cpp(spec->spacing), t_end);
    }
    return out;
}

std::vector<mrs::Vector> split_rows(const double* data, std::size_t rows, std::size_t dim) {
    std::vector<mrs::Vector> out;
    out.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) out.push_back(to_vector(data + r * dim, dim));
    return out;
}

}  // namespace

extern "C" {

const char* mrs_version(void) { return "1.0.0"; }

const char* mrs_last_error(void) { return g_last_error.c_str(); }

mrs_status mrs_schedule_create(mrs_schedule_family family, double theta_a, double theta_b, double sigma_inf,
                               double t_max, mrs_schedule** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        switch (family) {
            case MRS_SCHEDULE_CONSTANT:
                *out = new mrs_schedule{mrs::Schedule::constant(theta_a, sigma_inf, t_max)};
                break;
            case MRS_SCHEDULE_LINEAR:
                *out = new mrs_schedule{mrs::Schedule::linear(theta_a, theta_b, sigma_inf, t_max)};
                break;
            case MRS_SCHEDULE_COSINE:
                *out = new mrs_schedule{mrs::Schedule::cosine(theta_a, theta_b, sigma_inf, t_max)};
                break;
            default:
                throw std::invalid_argument("unknown schedule family");
        }
    });
}

void mrs_schedule_destroy(mrs_schedule* schedule) { delete schedule; }

double mrs_schedule_t_max(const mrs_schedule* schedule) { return schedule ? schedule->value.t_max() : 0.0; }

double mrs_schedule_sigma_inf(const mrs_schedule* schedule) { return schedule ? schedule->value.sigma_inf() : 0.0; }

#define MRS_SCALAR_FN(name, expr)                                                  \
    mrs_status name(const mrs_schedule* schedule, double arg, double* out) {      \
        return guarded([&] {                                                       \
            require(schedule && out, "null schedule or output");                   \
            const mrs::Schedule& s = schedule->value;                              \
            *out = (expr);                                                         \
        });                                                                        \
    }

MRS_SCALAR_FN(mrs_schedule_theta, s.theta(arg))
MRS_SCALAR_FN(mrs_schedule_alpha, s.alpha(arg))
MRS_SCALAR_FN(mrs_schedule_sigma, s.sigma(arg))
MRS_SCALAR_FN(mrs_schedule_lambda, s.lambda(arg))
MRS_SCALAR_FN(mrs_schedule_t_of_lambda, s.t_of_lambda(arg))
MRS_SCALAR_FN(mrs_schedule_g_squared, s.g_squared(arg))
MRS_SCALAR_FN(mrs_schedule_phi, mrs::phi_of_t(s, arg))

#undef MRS_SCALAR_FN

mrs_status mrs_make_grid(const mrs_schedule* schedule, size_t nfe, mrs_spacing spacing, double t_end,
                         double* times_out) {
    return guarded([&] {
        require(schedule && times_out, "null schedule or output");
        const auto grid = mrs::make_grid(schedule->value, nfe, to_cpp(spacing), t_end);
        std::copy(grid.times.begin(), grid.times.end(), times_out);
    });
}

mrs_status mrs_transition_moments(const mrs_schedule* schedule, size_t dim, const double* x0, const double* mu,
                                  double t, double* mean_out, double* std_out) {
    return guarded([&] {
        require(schedule && std_out, "null schedule or output");
        const auto m = mrs::transition_moments(schedule->value, to_vector(x0, dim), to_vector(mu, dim), t);
        write_vector(m.mean, mean_out);
        *std_out = m.std;
    });
}

mrs_status mrs_forward_sample(const mrs_schedule* schedule, size_t dim, const double* x0, const double* mu, double t,
                              uint64_t seed, uint64_t stream, double* x_out) {
    return guarded([&] {
        require(schedule != nullptr, "null schedule");
        mrs::RandomSource rng(seed, stream);
        write_vector(mrs::forward_sample(schedule->value, to_vector(x0, dim), to_vector(mu, dim), t, rng), x_out);
    });
}

mrs_status mrs_normal_draw(uint64_t seed, uint64_t stream, size_t count, double* out) {
    return guarded([&] {
        require(out != nullptr || count == 0, "null output buffer");
        mrs::RandomSource rng(seed, stream);
        for (size_t i = 0; i < count; ++i) out[i] = rng.normal();
    });
}

mrs_status mrs_convert(const mrs_schedule* schedule, size_t dim, const double* x, const double* mu, double t,
                       mrs_parameterization from, const double* value, mrs_parameterization to, double* out) {
    return guarded([&] {
        require(schedule != nullptr, "null schedule");
        const mrs::Vector fixed = to_vector(value, dim);
        const mrs::Predictor constant(to_cpp(from), static_cast<mrs::Index>(dim),
                                      [fixed](const mrs::Vector&, const mrs::Vector&, double) { return fixed; });
        const auto adapted = mrs::adapt_predictor(schedule->value, constant, to_cpp(to));
        write_vector(adapted(to_vector(x, dim), to_vector(mu, dim), t), out);
    });
}

mrs_status mrs_predictor_create_oracle(const mrs_schedule* schedule, const mrs_oracle_spec* spec,
                                       mrs_parameterization out_kind, mrs_predictor** out) {
    return guarded([&] {
        require(schedule && spec && out, "null argument");
        *out = nullptr;
        const mrs::Vector params = to_vector(spec->params, spec->dim);
        mrs::OracleSpec oracle;
        switch (spec->kind) {
            case MRS_ORACLE_DIRAC: oracle = mrs::DiracData{params}; break;
            case MRS_ORACLE_GAUSSIAN: oracle = mrs::GaussianData{params, spec->scale}; break;
            case MRS_ORACLE_CONSTANT_NOISE: oracle = mrs::ConstantNoise{params}; break;
            default: throw std::invalid_argument("unknown oracle kind");
        }
        *out = new mrs_predictor{mrs::make_oracle(schedule->value, oracle, to_cpp(out_kind))};
    });
}

mrs_status mrs_predictor_create_callback(mrs_parameterization kind, size_t dim, mrs_predictor_fn fn, void* user_data,
                                         mrs_predictor** out) {
    return guarded([&] {
        require(fn && out, "null callback or output");
        *out = nullptr;
        auto eval = [fn, user_data, dim](const mrs::Vector& x, const mrs::Vector& mu, double t) {
            mrs::Vector result(static_cast<mrs::Index>(dim));
            if (fn(user_data, dim, x.data(), mu.data(), t, result.data()) != 0)
                throw CallbackError("predictor callback reported failure");
            return result;
        };
        *out = new mrs_predictor{mrs::Predictor(to_cpp(kind), static_cast<mrs::Index>(dim), eval)};
    });
}

void mrs_predictor_destroy(mrs_predictor* predictor) { delete predictor; }

size_t mrs_predictor_dim(const mrs_predictor* predictor) {
    return predictor ? static_cast<size_t>(predictor->value.dim()) : 0;
}

mrs_parameterization mrs_predictor_kind(const mrs_predictor* predictor) {
    return predictor ? to_c(predictor->value.kind()) : MRS_PARAM_NOISE;
}

mrs_status mrs_predictor_eval(const mrs_predictor* predictor, const double* x, const double* mu, double t,
                              double* out) {
    return guarded([&] {
        require(predictor != nullptr, "null predictor");
        const auto dim = static_cast<std::size_t>(predictor->value.dim());
        write_vector(predictor->value(to_vector(x, dim), to_vector(mu, dim), t), out);
    });
}

void mrs_sampler_spec_init(mrs_sampler_spec* spec) {
    if (!spec) return;
    spec->family = MRS_SOLVER_MR_SDE;
    spec->parameterization = MRS_PARAM_DATA;
    spec->order = 1;
    spec->nfe = 10;
    spec->spacing = MRS_SPACING_UNIFORM_LAMBDA;
    spec->t_end = 0.0;
    spec->seed = 0;
    spec->chain = 0;
    spec->denoise_final = 0;
}

size_t mrs_sampler_noise_count(const mrs_sampler_spec* spec) {
    if (!spec) return 0;
    return spec->family == MRS_SOLVER_MR_ODE ? 0 : spec->nfe;
}

mrs_status mrs_sample(const mrs_schedule* schedule, const mrs_predictor* predictor, const mrs_sampler_spec* spec,
                      const double* mu, mrs_trajectory** out) {
    return guarded([&] {
        require(predictor && out, "null predictor or output");
        *out = nullptr;
        const auto cpp_spec = to_cpp(schedule, spec, nullptr);
        const auto dim = static_cast<std::size_t>(predictor->value.dim());
        auto traj = mrs::run(cpp_spec, schedule->value, predictor->value, to_vector(mu, dim));
        *out = new mrs_trajectory{std::move(traj)};
    });
}

mrs_status mrs_sample_with_noise(const mrs_schedule* schedule, const mrs_predictor* predictor,
                                 const mrs_sampler_spec* spec, const double* times, const double* mu,
                                 const double* x_T, const double* noise, mrs_trajectory** out) {
    return guarded([&] {
        require(predictor && out, "null predictor or output");
        *out = nullptr;
        const auto cpp_spec = to_cpp(schedule, spec, times);
        const auto dim = static_cast<std::size_t>(predictor->value.dim());
        const std::size_t count = mrs::noise_count(cpp_spec);
        require(count == 0 || noise != nullptr, "noise required for stochastic solvers");
        const auto zs = split_rows(noise, count, dim);
        auto traj = mrs::run_with_noise(cpp_spec, schedule->value, predictor->value, to_vector(mu, dim),
                                        to_vector(x_T, dim), zs);
        *out = new mrs_trajectory{std::move(traj)};
    });
}

mrs_status mrs_coarsen_noise(const mrs_schedule* schedule, const mrs_sampler_spec* fine_spec,
                             const double* fine_times, size_t dim, const double* fine_noise, size_t stride,
                             double* coarse_out) {
    return guarded([&] {
        require(coarse_out != nullptr, "null output");
        const auto cpp_spec = to_cpp(schedule, fine_spec, fine_times);
        const std::size_t count = mrs::noise_count(cpp_spec);
        const auto zs = split_rows(fine_noise, count, dim);
        const auto coarse = mrs::coarsen_noise(schedule->value, cpp_spec, zs, stride);
        for (std::size_t j = 0; j < coarse.size(); ++j) write_vector(coarse[j], coarse_out + j * dim);
    });
}

mrs_status mrs_dirac_terminal_moments(const mrs_schedule* schedule, int stochastic, size_t dim, const double* x0,
                                      const double* mu, double t_end, double* mean_out, double* var_out) {
    return guarded([&] {
        require(schedule != nullptr, "null schedule");
        const auto m = mrs::dirac_terminal_moments(schedule->value, stochastic != 0, to_vector(x0, dim),
                                                   to_vector(mu, dim), t_end);
        write_vector(m.mean, mean_out);
        write_vector(m.var, var_out);
    });
}

void mrs_trajectory_destroy(mrs_trajectory* trajectory) { delete trajectory; }

size_t mrs_trajectory_dim(const mrs_trajectory* trajectory) {
    if (!trajectory || trajectory->value.states.empty()) return 0;
    return static_cast<size_t>(trajectory->value.states.front().value.size());
}

size_t mrs_trajectory_num_states(const mrs_trajectory* trajectory) {
    return trajectory ? trajectory->value.states.size() : 0;
}

size_t mrs_trajectory_num_outputs(const mrs_trajectory* trajectory) {
    return trajectory ? trajectory->value.model_outputs.size() : 0;
}

size_t mrs_trajectory_nfe(const mrs_trajectory* trajectory) { return trajectory ? trajectory->value.nfe : 0; }

const double* mrs_trajectory_state(const mrs_trajectory* trajectory, size_t index, double* t_out) {
    if (!trajectory || index >= trajectory->value.states.size()) return nullptr;
    const auto& s = trajectory->value.states[index];
    if (t_out) *t_out = s.t;
    return s.value.data();
}

const double* mrs_trajectory_output(const mrs_trajectory* trajectory, size_t index, double* t_out) {
    if (!trajectory || index >= trajectory->value.model_outputs.size()) return nullptr;
    const auto& s = trajectory->value.model_outputs[index];
    if (t_out) *t_out = s.t;
    return s.value.data();
}

const double* mrs_trajectory_final(const mrs_trajectory* trajectory) {
    return trajectory ? trajectory->value.final.data() : nullptr;
}

mrs_status mrs_convergence_ratio(const mrs_schedule* schedule, const mrs_trajectory* trajectory, double rel_tol,
                                 size_t capacity, size_t* step_out, double* h_out, double* ratio_out,
                                 size_t* count_out) {
    return guarded([&] {
        require(schedule && trajectory && count_out, "null argument");
        const auto h = mrs::log_snr_steps(schedule->value, trajectory->value);
        const auto report = mrs::convergence_ratio(trajectory->value, h, rel_tol > 0.0 ? rel_tol : 1e-12);
        *count_out = report.per_step_ratio.size();
        for (std::size_t i = 0; i < report.per_step_ratio.size() && i < capacity; ++i) {
            if (step_out) step_out[i] = report.step_index[i];
            if (h_out) h_out[i] = report.h_values[i];
            if (ratio_out) ratio_out[i] = report.per_step_ratio[i];
        }
    });
}

mrs_status mrs_pca_fit(size_t n, size_t dim, const double* points, mrs_pca** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        const auto pts = split_rows(points, n, dim);
        *out = new mrs_pca{mrs::fit_pca(pts)};
    });
}

void mrs_pca_destroy(mrs_pca* pca) { delete pca; }

mrs_status mrs_pca_project(const mrs_pca* pca, size_t n, const double* points, double* out_2d) {
    return guarded([&] {
        require(pca && out_2d, "null argument");
        const auto dim = static_cast<std::size_t>(pca->value.center.size());
        const auto proj = mrs::project(pca->value, split_rows(points, n, dim));
        for (std::size_t i = 0; i < proj.size(); ++i) {
            out_2d[2 * i] = proj[i].first;
            out_2d[2 * i + 1] = proj[i].second;
        }
    });
}

mrs_status mrs_pca_explained_variance(const mrs_pca* pca, double* first, double* second) {
    return guarded([&] {
        require(pca && first && second, "null argument");
        *first = pca->value.explained_variance.first;
        *second = pca->value.explained_variance.second;
    });
}

mrs_status mrs_empirical_order(size_t n, const size_t* nfe, const double* err, double* order_out) {
    return guarded([&] {
        require((nfe && err) || n == 0, "null input");
        require(order_out != nullptr, "null output");
        std::vector<std::pair<std::size_t, double>> pairs;
        for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(nfe[i], err[i]);
        *order_out = mrs::empirical_order(pairs);
    });
}

mrs_status mrs_rmse(size_t n, const double* a, const double* b, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = mrs::rmse(to_vector(a, n), to_vector(b, n));
    });
}

}  // extern "C"
