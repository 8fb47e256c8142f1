// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"

namespace mrcli {

/// Writes trajectories.csv and summary.json.
void cmd_sample(const ExperimentConfig& cfg);
/// Writes order_study.csv.
void cmd_convergence_study(const ExperimentConfig& cfg);
/// Writes compare.csv.
void cmd_compare_baselines(const ExperimentConfig& cfg);
/// Writes trajectory_2d.csv and trajectory_summary.json.
void cmd_trajectory(const ExperimentConfig& cfg);
/// Writes <parameterization>/radius.csv and radius_summary.json.
void cmd_radius_report(const ExperimentConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

/// Convenience overload for tests.
int run_cli(const std::vector<std::string>& args);

}  // namespace mrcli
