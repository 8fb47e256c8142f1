// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cli/config.hpp"
#include "cli/handles.hpp"

namespace mrcli {

/// Schedule, oracle predictor and conditioning mean built from a config.
class Problem {
public:
    explicit Problem(const ExperimentConfig& cfg);

    const mrs_schedule* schedule() const noexcept { return schedule_.get(); }
    const mrs_predictor* predictor() const noexcept { return predictor_.get(); }
    const std::vector<double>& mu() const noexcept { return mu_; }
    std::size_t dim() const noexcept { return mu_.size(); }
    double sigma_inf() const noexcept { return mrs_schedule_sigma_inf(schedule_.get()); }

    double lambda(double t) const;
    /// Grid for `spec`, nfe + 1 decreasing times.
    std::vector<double> grid(const mrs_sampler_spec& spec) const;

private:
    ScheduleHandle schedule_;
    PredictorHandle predictor_;
    std::vector<double> mu_;
};

/// A finished chain, copied out of its trajectory handle.
struct ChainResult {
    std::vector<double> times;   // nfe + 1
    std::vector<double> states;  // (nfe + 1) x dim, row-major
    std::vector<double> final;   // dim
    std::size_t nfe = 0;
};

ChainResult collect(const mrs_trajectory* traj);

/// Runs body(i) for i in [0, count) on up to `workers` threads. The first
/// failure (by index) is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

/// Runs `chains` chains with streams 0..chains-1 under spec.seed.
std::vector<ChainResult> run_chains(const Problem& problem, const mrs_sampler_spec& spec, std::size_t chains,
                                    std::size_t workers);

/// Spec for one method at one NFE, inheriting everything else from `base`.
mrs_sampler_spec spec_for(const mrs_sampler_spec& base, const Method& method, std::size_t nfe);

}  // namespace mrcli
