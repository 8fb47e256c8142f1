// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "cli/output.hpp"
#include "cli/runner.hpp"

namespace mrcli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_mr(mrs_solver_family f) { return f == MRS_SOLVER_MR_SDE || f == MRS_SOLVER_MR_ODE; }

Method method_of(const mrs_sampler_spec& spec) {
    Method m{spec.family, spec.parameterization, spec.order};
    if (!is_mr(m.family)) {
        m.parameterization = MRS_PARAM_NOISE;
        m.order = 1;
    }
    return m;
}

std::vector<std::string> state_header(std::vector<std::string> head, std::size_t dim) {
    for (std::size_t k = 0; k < dim; ++k) head.push_back("x_" + std::to_string(k));
    return head;
}

struct SampleMoments {
    std::vector<double> mean;
    std::vector<double> var;  // unbiased; NaN with a single chain
};

SampleMoments terminal_moments(const std::vector<ChainResult>& chains, std::size_t dim) {
    SampleMoments m;
    m.mean.assign(dim, 0.0);
    m.var.assign(dim, 0.0);
    const double n = static_cast<double>(chains.size());
    for (const auto& c : chains)
        for (std::size_t k = 0; k < dim; ++k) m.mean[k] += c.final[k];
    for (auto& v : m.mean) v /= n;
    for (const auto& c : chains)
        for (std::size_t k = 0; k < dim; ++k) m.var[k] += (c.final[k] - m.mean[k]) * (c.final[k] - m.mean[k]);
    for (auto& v : m.var) v = chains.size() > 1 ? v / (n - 1.0) : kNaN;
    return m;
}

struct AnalyticMoments {
    std::vector<double> mean;
    std::vector<double> var;
};

/// Exact terminal moments when the data distribution is a point mass. The
/// reverse-SDE reference applies to every stochastic solver, the PF-ODE one to
/// MR-ODE.
bool analytic_moments(const ExperimentConfig& cfg, const Problem& problem, const mrs_sampler_spec& spec,
                      AnalyticMoments& out) {
    if (cfg.oracle.kind != MRS_ORACLE_DIRAC || spec.denoise_final) return false;
    const std::size_t dim = problem.dim();
    out.mean.assign(dim, 0.0);
    out.var.assign(dim, 0.0);
    const double t_end = problem.grid(spec).back();
    check(mrs_dirac_terminal_moments(problem.schedule(), spec.family != MRS_SOLVER_MR_ODE, dim,
                                     cfg.oracle.params.data(), problem.mu().data(), t_end, out.mean.data(),
                                     out.var.data()),
          "terminal moments");
    return true;
}

double sum_sq_diff(const std::vector<double>& a, const double* b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

std::size_t lcm_of(const std::vector<std::size_t>& xs) {
    return std::accumulate(xs.begin(), xs.end(), std::size_t{1},
                           [](std::size_t a, std::size_t b) { return std::lcm(a, b); });
}

TrajectoryHandle sample_with_noise(const Problem& problem, const mrs_sampler_spec& spec,
                                   const std::vector<double>& times, const double* x_T, const double* noise) {
    mrs_trajectory* traj = nullptr;
    check(mrs_sample_with_noise(problem.schedule(), problem.predictor(), &spec, times.data(), problem.mu().data(),
                                x_T, noise, &traj),
          "sample");
    return TrajectoryHandle(traj);
}

}  // namespace

void cmd_sample(const ExperimentConfig& cfg) {
    const Problem problem(cfg);
    const std::size_t dim = problem.dim();
    const auto& spec = cfg.sampler;
    spdlog::info("sample: {} at nfe {} with {} chain(s)", method_name(method_of(spec)), spec.nfe, cfg.chains);

    const auto start = std::chrono::steady_clock::now();
    const auto chains = run_chains(problem, spec, cfg.chains, cfg.workers);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir(cfg.out_dir);
    ensure_directory(dir);
    if (cfg.write_trajectories) {
        const auto& times = chains.front().times;
        std::vector<double> lambdas;
        for (double t : times) lambdas.push_back(problem.lambda(t));
        CsvWriter csv(dir / "trajectories.csv", state_header({"chain", "step", "t", "lambda"}, dim));
        for (std::size_t c = 0; c < chains.size(); ++c) {
            for (std::size_t i = 0; i < times.size(); ++i) {
                csv.field(c).field(i).field(times[i]).field(lambdas[i]);
                for (std::size_t k = 0; k < dim; ++k) csv.field(chains[c].states[i * dim + k]);
                csv.end_row();
            }
        }
    }

    const auto moments = terminal_moments(chains, dim);
    json summary;
    summary["solver"] = method_name(method_of(spec));
    summary["nfe"] = chains.front().nfe;
    summary["chains"] = cfg.chains;
    summary["dim"] = dim;
    summary["seed"] = spec.seed;
    summary["t_end"] = chains.front().times.back();
    summary["terminal_mean"] = json_array(moments.mean);
    summary["terminal_var"] = json_array(moments.var);
    AnalyticMoments exact;
    if (analytic_moments(cfg, problem, spec, exact)) {
        summary["analytic_mean"] = json_array(exact.mean);
        summary["analytic_var"] = json_array(exact.var);
    }
    summary["wall_time_s"] = wall;
    write_json(dir / "summary.json", summary);
    spdlog::info("sample: wrote {}", dir.string());
}

void cmd_convergence_study(const ExperimentConfig& cfg) {
    if (cfg.nfe_list.empty()) throw ConfigError("nfe_list", "convergence-study needs an NFE list");
    const Problem problem(cfg);
    const std::size_t dim = problem.dim();
    const Method method = method_of(cfg.sampler);
    const mrs_sampler_spec base = spec_for(cfg.sampler, method, 1);

    // A constant model output makes every MR step exact, so a single jump is
    // the closed-form reference.
    const bool closed_form =
        is_mr(method.family) &&
        ((cfg.oracle.kind == MRS_ORACLE_DIRAC && method.parameterization == MRS_PARAM_DATA) ||
         (cfg.oracle.kind == MRS_ORACLE_CONSTANT_NOISE && method.parameterization == MRS_PARAM_NOISE));

    const std::size_t finest = *std::max_element(cfg.nfe_list.begin(), cfg.nfe_list.end());
    const std::size_t base_lcm = lcm_of(cfg.nfe_list);
    // The fine grid must nest every coarse grid; it doubles as the reference
    // unless the closed form is available.
    const std::size_t ref_nfe =
        closed_form ? base_lcm : ((100 * finest + base_lcm - 1) / base_lcm) * base_lcm;
    spdlog::info("convergence-study: {} reference {} (fine grid nfe {})", method_name(method),
                 closed_form ? "closed-form single jump" : "same solver", ref_nfe);

    mrs_sampler_spec fine = spec_for(base, method, ref_nfe);
    const std::vector<double> fine_times = problem.grid(fine);
    const std::size_t fine_noise_count = mrs_sampler_noise_count(&fine);

    auto coarse_spec = [&](std::size_t nfe) {
        mrs_sampler_spec s = fine;
        s.nfe = nfe;
        if (nfe < 2) s.order = 1;
        return s;
    };
    auto coarse_times = [&](std::size_t stride) {
        std::vector<double> t;
        for (std::size_t i = 0; i < fine_times.size(); i += stride) t.push_back(fine_times[i]);
        return t;
    };

    std::vector<std::vector<double>> sq_err(cfg.chains, std::vector<double>(cfg.nfe_list.size(), 0.0));
    parallel_for(cfg.chains, cfg.workers, [&](std::size_t c) {
        std::vector<double> z(dim * (1 + fine_noise_count));
        check(mrs_normal_draw(fine.seed, c, z.size(), z.data()), "noise");
        std::vector<double> x_T(dim);
        for (std::size_t k = 0; k < dim; ++k) x_T[k] = problem.mu()[k] + problem.sigma_inf() * z[k];
        const double* fine_noise = z.data() + dim;

        auto run_at = [&](std::size_t nfe) {
            const std::size_t stride = ref_nfe / nfe;
            const auto spec = coarse_spec(nfe);
            std::vector<double> noise(dim * mrs_sampler_noise_count(&spec));
            if (!noise.empty())
                check(mrs_coarsen_noise(problem.schedule(), &fine, fine_times.data(), dim, fine_noise, stride,
                                        noise.data()),
                      "coarsen noise");
            auto traj = sample_with_noise(problem, spec, coarse_times(stride), x_T.data(), noise.data());
            const double* f = mrs_trajectory_final(traj.get());
            return std::vector<double>(f, f + dim);
        };

        const std::vector<double> reference = run_at(closed_form ? 1 : ref_nfe);
        for (std::size_t j = 0; j < cfg.nfe_list.size(); ++j) {
            const auto x = run_at(cfg.nfe_list[j]);
            sq_err[c][j] = sum_sq_diff(x, reference.data());
        }
    });

    std::vector<double> errors(cfg.nfe_list.size(), 0.0);
    for (std::size_t j = 0; j < errors.size(); ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < cfg.chains; ++c) s += sq_err[c][j];
        errors[j] = std::sqrt(s / static_cast<double>(cfg.chains * dim));
    }

    // Below this the errors are rounding noise and a slope is meaningless.
    constexpr double kNegligible = 1e-10;
    std::string order_text = "n/a";
    const bool measurable = cfg.nfe_list.size() >= 3 &&
                            std::all_of(errors.begin(), errors.end(), [](double e) { return e > kNegligible; });
    if (measurable) {
        double order = 0.0;
        check(mrs_empirical_order(errors.size(), cfg.nfe_list.data(), errors.data(), &order), "empirical order");
        order_text = format_double(order);
    }

    const fs::path dir(cfg.out_dir);
    ensure_directory(dir);
    CsvWriter csv(dir / "order_study.csv", {"nfe", "rmse_vs_reference"});
    for (std::size_t j = 0; j < errors.size(); ++j) {
        csv.field(cfg.nfe_list[j]).field(errors[j]);
        csv.end_row();
    }
    csv.field(std::string_view("order")).field(std::string_view(order_text));
    csv.end_row();
    spdlog::info("convergence-study: empirical order {}", order_text);
}

void cmd_compare_baselines(const ExperimentConfig& cfg) {
    if (cfg.oracle.output != MRS_PARAM_NOISE)
        throw ConfigError("oracle.predictor", "compare-baselines expects a noise-parameterized oracle");
    const Problem problem(cfg);
    const std::size_t dim = problem.dim();

    std::vector<Method> methods = cfg.methods;
    if (methods.empty()) {
        const int k = cfg.sampler.order;
        methods = {{MRS_SOLVER_MR_SDE, MRS_PARAM_NOISE, k}, {MRS_SOLVER_MR_ODE, MRS_PARAM_NOISE, k},
                   {MRS_SOLVER_MR_SDE, MRS_PARAM_DATA, k},  {MRS_SOLVER_MR_ODE, MRS_PARAM_DATA, k},
                   {MRS_SOLVER_POSTERIOR, MRS_PARAM_NOISE, 1}, {MRS_SOLVER_EULER_MARUYAMA, MRS_PARAM_NOISE, 1}};
    }
    const std::vector<std::size_t> nfes = cfg.nfe_list.empty() ? std::vector<std::size_t>{cfg.sampler.nfe} : cfg.nfe_list;

    const bool has_target = cfg.oracle.kind != MRS_ORACLE_CONSTANT_NOISE;
    const fs::path dir(cfg.out_dir);
    ensure_directory(dir);
    CsvWriter csv(dir / "compare.csv", {"method", "nfe", "rmse", "terminal_mean_err", "terminal_var_err"});
    for (const auto& method : methods) {
        for (std::size_t nfe : nfes) {
            const auto spec = spec_for(cfg.sampler, method, nfe);
            if (spec.order == 2 && nfe < 2)
                throw ConfigError("nfe_list", "order-2 methods need at least 2 steps");
            spdlog::debug("compare-baselines: {} at nfe {}", method_name(method), nfe);
            const auto chains = run_chains(problem, spec, cfg.chains, cfg.workers);

            double rmse = kNaN;
            if (has_target) {
                double s = 0.0;
                for (const auto& c : chains) s += sum_sq_diff(c.final, cfg.oracle.params.data());
                rmse = std::sqrt(s / static_cast<double>(chains.size() * dim));
            }
            double mean_err = kNaN;
            double var_err = kNaN;
            AnalyticMoments exact;
            if (analytic_moments(cfg, problem, spec, exact)) {
                const auto m = terminal_moments(chains, dim);
                mean_err = 0.0;
                var_err = chains.size() > 1 ? 0.0 : kNaN;
                for (std::size_t k = 0; k < dim; ++k) {
                    mean_err = std::max(mean_err, std::abs(m.mean[k] - exact.mean[k]));
                    if (chains.size() > 1) var_err = std::max(var_err, std::abs(m.var[k] - exact.var[k]) / exact.var[k]);
                }
            }
            csv.field(std::string_view(method_name(method))).field(nfe).field(rmse).field(mean_err).field(var_err);
            csv.end_row();
        }
    }
    spdlog::info("compare-baselines: wrote {}", (dir / "compare.csv").string());
}

void cmd_trajectory(const ExperimentConfig& cfg) {
    if (cfg.dim() < 2) throw ConfigError("mu", "trajectory projection needs dimension at least 2");
    const Problem problem(cfg);
    const std::size_t dim = problem.dim();
    std::vector<Method> methods = cfg.methods;
    if (methods.empty()) methods.push_back(method_of(cfg.sampler));

    std::vector<ChainResult> runs;
    std::vector<double> all_points;
    for (const auto& method : methods) {
        auto spec = spec_for(cfg.sampler, method, cfg.sampler.nfe);
        spec.chain = 0;
        auto chains = run_chains(problem, spec, 1, 1);
        all_points.insert(all_points.end(), chains.front().states.begin(), chains.front().states.end());
        runs.push_back(std::move(chains.front()));
    }

    mrs_pca* raw = nullptr;
    check(mrs_pca_fit(all_points.size() / dim, dim, all_points.data(), &raw), "pca");
    PcaHandle pca(raw);
    double ev1 = 0.0;
    double ev2 = 0.0;
    check(mrs_pca_explained_variance(pca.get(), &ev1, &ev2), "pca");

    const fs::path dir(cfg.out_dir);
    ensure_directory(dir);
    CsvWriter csv(dir / "trajectory_2d.csv", {"method", "step", "pc1", "pc2"});
    json summary;
    summary["explained_variance"] = {json_number(ev1), json_number(ev2)};
    summary["methods"] = json::array();
    for (std::size_t m = 0; m < methods.size(); ++m) {
        const std::size_t n = runs[m].times.size();
        std::vector<double> xy(2 * n);
        check(mrs_pca_project(pca.get(), n, runs[m].states.data(), xy.data()), "pca");
        double length = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            csv.field(std::string_view(method_name(methods[m]))).field(i).field(xy[2 * i]).field(xy[2 * i + 1]);
            csv.end_row();
            if (i > 0) length += std::hypot(xy[2 * i] - xy[2 * i - 2], xy[2 * i + 1] - xy[2 * i - 1]);
        }
        summary["methods"].push_back({{"method", method_name(methods[m])}, {"path_length", json_number(length)}});
    }
    write_json(dir / "trajectory_summary.json", summary);
    spdlog::info("trajectory: wrote {}", (dir / "trajectory_2d.csv").string());
}

void cmd_radius_report(const ExperimentConfig& cfg) {
    if (!is_mr(cfg.sampler.family)) throw ConfigError("sampler.family", "radius-report needs an MR solver");
    if (cfg.sampler.nfe < 2) throw ConfigError("sampler.nfe", "radius-report needs at least 2 steps");
    const Problem problem(cfg);
    std::vector<mrs_parameterization> params = cfg.parameterizations;
    if (params.empty()) params = {MRS_PARAM_NOISE, MRS_PARAM_DATA};

    const fs::path dir(cfg.out_dir);
    ensure_directory(dir);
    json summary = json::object();
    for (auto param : params) {
        const std::string name = param == MRS_PARAM_NOISE ? "noise" : "data";
        mrs_sampler_spec spec = cfg.sampler;
        spec.parameterization = param;
        spec.chain = 0;
        if (param != MRS_PARAM_DATA) spec.denoise_final = 0;
        mrs_trajectory* raw = nullptr;
        check(mrs_sample(problem.schedule(), problem.predictor(), &spec, problem.mu().data(), &raw), "sample");
        TrajectoryHandle traj(raw);

        std::size_t count = 0;
        check(mrs_convergence_ratio(problem.schedule(), traj.get(), 0.0, 0, nullptr, nullptr, nullptr, &count),
              "convergence ratio");
        std::vector<std::size_t> steps(count);
        std::vector<double> h(count);
        std::vector<double> ratio(count);
        check(mrs_convergence_ratio(problem.schedule(), traj.get(), 0.0, count, steps.data(), h.data(), ratio.data(),
                                    &count),
              "convergence ratio");

        ensure_directory(dir / name);
        CsvWriter csv(dir / name / "radius.csv", {"step", "t", "lambda", "h", "ratio"});
        double mean = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            // The expansion point of step i is t_{i-1}.
            double t = 0.0;
            mrs_trajectory_state(traj.get(), steps[j] - 1, &t);
            csv.field(steps[j]).field(t).field(problem.lambda(t)).field(h[j]).field(ratio[j]);
            csv.end_row();
            mean += ratio[j];
        }
        summary[name] = {{"mean_ratio", json_number(count ? mean / static_cast<double>(count) : kNaN)},
                         {"steps", count}};
        spdlog::info("radius-report: {} mean ratio {}", name, count ? mean / static_cast<double>(count) : kNaN);
    }
    write_json(dir / "radius_summary.json", summary);
}

}  // namespace mrcli
