// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mrsampler/mrsampler.h"

namespace mrcli {

struct ScheduleConfig {
    mrs_schedule_family family = MRS_SCHEDULE_CONSTANT;
    double theta_a = 4.0;
    double theta_b = 0.0;
    double sigma_inf = 1.0;
    double t_max = 1.0;
};

struct OracleConfig {
    mrs_oracle_kind kind = MRS_ORACLE_DIRAC;
    std::vector<double> params;
    double scale = 0.0;
    /// Parameterization the oracle predictor reports in.
    mrs_parameterization output = MRS_PARAM_NOISE;
};

/// One solver configuration as named on the command line or in config lists,
/// e.g. "mr_sde_d_2", "mr_ode_n_1", "posterior", "euler_maruyama".
struct Method {
    mrs_solver_family family = MRS_SOLVER_MR_SDE;
    mrs_parameterization parameterization = MRS_PARAM_DATA;
    int order = 1;
};

Method parse_method(const std::string& name);
std::string method_name(const Method& m);

struct ExperimentConfig {
    ScheduleConfig schedule;
    OracleConfig oracle;
    std::vector<double> mu;
    mrs_sampler_spec sampler{};
    std::size_t chains = 1;
    std::size_t workers = 1;
    std::vector<std::size_t> nfe_list;
    std::vector<Method> methods;
    std::vector<mrs_parameterization> parameterizations;
    std::string out_dir = "out";
    bool write_trajectories = true;

    std::size_t dim() const noexcept { return mu.size(); }
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::vector<std::size_t>> nfe;
    std::optional<std::size_t> workers;
};

/// Applies command-line overrides to the raw document: --seed sets
/// sampler.seed, --out sets outputs.dir, --workers sets workers, and --nfe
/// sets nfe_list (and sampler.nfe when it holds a single value).
void apply_overrides(nlohmann::json& doc, const Overrides& overrides);

/// Validates and decodes a configuration document. Unknown keys are
/// rejected. Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file; throws ConfigError on I/O or syntax errors.
nlohmann::json read_config_file(const std::string& path);

}  // namespace mrcli
