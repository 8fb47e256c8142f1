// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "mrsampler/mrsampler.h"

namespace mrcli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

/// Failure carrying the process exit code it maps to.
class RunError : public std::runtime_error {
public:
    RunError(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

/// Rejected configuration, reported against the offending field.
class ConfigError : public RunError {
public:
    ConfigError(const std::string& field, const std::string& message)
        : RunError(kExitConfig, field + ": " + message) {}
};

/// Throws RunError for any non-OK status. Argument-style failures map to the
/// config exit code, everything raised while running maps to the numerical one.
void check(mrs_status status, const char* context);

struct ScheduleDeleter {
    void operator()(mrs_schedule* p) const noexcept { mrs_schedule_destroy(p); }
};
struct PredictorDeleter {
    void operator()(mrs_predictor* p) const noexcept { mrs_predictor_destroy(p); }
};
struct TrajectoryDeleter {
    void operator()(mrs_trajectory* p) const noexcept { mrs_trajectory_destroy(p); }
};
struct PcaDeleter {
    void operator()(mrs_pca* p) const noexcept { mrs_pca_destroy(p); }
};

using ScheduleHandle = std::unique_ptr<mrs_schedule, ScheduleDeleter>;
using PredictorHandle = std::unique_ptr<mrs_predictor, PredictorDeleter>;
using TrajectoryHandle = std::unique_ptr<mrs_trajectory, TrajectoryDeleter>;
using PcaHandle = std::unique_ptr<mrs_pca, PcaDeleter>;

}  // namespace mrcli
