// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace mrcli {

void check(mrs_status status, const char* context) {
    if (status == MRS_OK) return;
    const std::string message = std::string(context) + ": " + mrs_last_error();
    switch (status) {
        case MRS_ERR_NUMERICAL:
        case MRS_ERR_CALLBACK:
        case MRS_ERR_INTERNAL:
            throw RunError(kExitNumerical, message);
        default:
            throw RunError(kExitConfig, message);
    }
}

Problem::Problem(const ExperimentConfig& cfg) : mu_(cfg.mu) {
    mrs_schedule* s = nullptr;
    check(mrs_schedule_create(cfg.schedule.family, cfg.schedule.theta_a, cfg.schedule.theta_b, cfg.schedule.sigma_inf,
                              cfg.schedule.t_max, &s),
          "schedule");
    schedule_.reset(s);

    mrs_oracle_spec oracle{cfg.oracle.kind, cfg.oracle.params.size(), cfg.oracle.params.data(), cfg.oracle.scale};
    mrs_predictor* p = nullptr;
    check(mrs_predictor_create_oracle(s, &oracle, cfg.oracle.output, &p), "oracle");
    predictor_.reset(p);
}

double Problem::lambda(double t) const {
    double out = 0.0;
    check(mrs_schedule_lambda(schedule_.get(), t, &out), "lambda");
    return out;
}

std::vector<double> Problem::grid(const mrs_sampler_spec& spec) const {
    std::vector<double> times(spec.nfe + 1);
    const double t_end = spec.t_end > 0.0 ? spec.t_end : 1e-3 * mrs_schedule_t_max(schedule_.get());
    check(mrs_make_grid(schedule_.get(), spec.nfe, spec.spacing, t_end, times.data()), "grid");
    return times;
}

ChainResult collect(const mrs_trajectory* traj) {
    ChainResult out;
    const std::size_t dim = mrs_trajectory_dim(traj);
    const std::size_t n = mrs_trajectory_num_states(traj);
    out.times.reserve(n);
    out.states.reserve(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        double t = 0.0;
        const double* x = mrs_trajectory_state(traj, i, &t);
        out.times.push_back(t);
        out.states.insert(out.states.end(), x, x + dim);
    }
    const double* f = mrs_trajectory_final(traj);
    out.final.assign(f, f + dim);
    out.nfe = mrs_trajectory_nfe(traj);
    return out;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<ChainResult> run_chains(const Problem& problem, const mrs_sampler_spec& spec, std::size_t chains,
                                    std::size_t workers) {
    std::vector<ChainResult> results(chains);
    parallel_for(chains, workers, [&](std::size_t c) {
        mrs_sampler_spec local = spec;
        local.chain = c;
        mrs_trajectory* traj = nullptr;
        check(mrs_sample(problem.schedule(), problem.predictor(), &local, problem.mu().data(), &traj),
              ("chain " + std::to_string(c)).c_str());
        TrajectoryHandle owned(traj);
        results[c] = collect(traj);
    });
    return results;
}

mrs_sampler_spec spec_for(const mrs_sampler_spec& base, const Method& method, std::size_t nfe) {
    mrs_sampler_spec spec = base;
    spec.family = method.family;
    spec.parameterization = method.parameterization;
    spec.order = method.order;
    spec.nfe = nfe;
    const bool data_mr = (method.family == MRS_SOLVER_MR_SDE || method.family == MRS_SOLVER_MR_ODE) &&
                         method.parameterization == MRS_PARAM_DATA;
    if (!data_mr) spec.denoise_final = 0;
    return spec;
}

}  // namespace mrcli
