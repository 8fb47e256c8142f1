// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "core/sampler.hpp"

namespace mrs {

/// Per-step fraction of output components whose estimated Taylor radius
/// R_i = |c0_i| / |c1_i| exceeds the step |lambda - lambda_s|. c0 is the
/// buffered model output at the start of the step, c1 the backward
/// difference over the previous step (the same D an order-2 solver uses).
struct ConvergenceReport {
    std::vector<double> per_step_ratio;
    std::vector<double> h_values;
    /// Index into the trajectory's steps (1-based, as in t_i) for each entry.
    std::vector<std::size_t> step_index;

    double mean_ratio() const;
};

/// `h[i-1]` is the log-SNR step from t_{i-1} to t_i (one per trajectory step).
/// Components with |c1_i| <= rel_tol * ||c0||_inf count as convergent.
ConvergenceReport convergence_ratio(const Trajectory& traj, std::span<const double> h, double rel_tol = 1e-12);

/// Log-SNR steps of a trajectory's time grid.
std::vector<double> log_snr_steps(const Schedule& s, const Trajectory& traj);

/// Top-two principal directions of a point cloud.
struct PcaBasis {
    Vector center;
    Eigen::MatrixXd directions;  // dim x 2, columns are unit loadings (or zero)
    std::pair<double, double> explained_variance{0.0, 0.0};
};

/// Fits the basis with a thin SVD of the centered points. Each loading is
/// signed so its first nonzero entry is positive. Identical points give a
/// zero basis with explained variance (0, 0).
PcaBasis fit_pca(std::span<const Vector> points);

std::vector<std::pair<double, double>> project(const PcaBasis& basis, std::span<const Vector> points);

struct TrajectoryProjection {
    std::vector<std::pair<double, double>> points_2d;
    std::pair<double, double> explained_variance{0.0, 0.0};
};

TrajectoryProjection pca_project(const Trajectory& traj);

/// Sum of Euclidean segment lengths of a 2D polyline.
double path_length(std::span<const std::pair<double, double>> points);

/// Least-squares slope of log(err) against log(1 / nfe).
double empirical_order(std::span<const std::pair<std::size_t, double>> errors);

double rmse(const Vector& a, const Vector& b);
/// Over all states of two trajectories of the same shape.
double rmse(const Trajectory& a, const Trajectory& b);

}  // namespace mrs
