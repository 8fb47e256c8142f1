// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/diagnostics.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/SVD>

namespace mrs {

double ConvergenceReport::mean_ratio() const {
    if (per_step_ratio.empty()) return 0.0;
    return std::accumulate(per_step_ratio.begin(), per_step_ratio.end(), 0.0) /
           static_cast<double>(per_step_ratio.size());
}

ConvergenceReport convergence_ratio(const Trajectory& traj, std::span<const double> h, double rel_tol) {
    const auto& q = traj.model_outputs;
    if (q.size() < 2) throw std::invalid_argument("convergence_ratio: needs at least two buffered model outputs");
    const std::size_t steps = traj.states.size() - 1;
    if (h.size() != steps) throw std::invalid_argument("convergence_ratio: one h value per trajectory step expected");

    ConvergenceReport report;
    // Step i (t_{i-1} -> t_i) sees c0 = Q_{i-1} and c1 = (Q_{i-1} - Q_{i-2}) / h_{i-1}.
    for (std::size_t i = 2; i <= steps && i - 1 < q.size(); ++i) {
        const Vector& c0 = q[i - 1].value;
        const Vector c1 = (c0 - q[i - 2].value) / h[i - 2];
        const double step = std::abs(h[i - 1]);
        const double threshold = rel_tol * c0.cwiseAbs().maxCoeff();
        Index converged = 0;
        for (Index k = 0; k < c0.size(); ++k) {
            const double d = std::abs(c1[k]);
            if (d <= threshold || std::abs(c0[k]) / d > step) ++converged;
        }
        report.per_step_ratio.push_back(static_cast<double>(converged) / static_cast<double>(c0.size()));
        report.h_values.push_back(step);
        report.step_index.push_back(i);
    }
    return report;
}

std::vector<double> log_snr_steps(const Schedule& s, const Trajectory& traj) {
    std::vector<double> h;
    for (std::size_t i = 1; i < traj.states.size(); ++i)
        h.push_back(s.lambda(traj.states[i].t) - s.lambda(traj.states[i - 1].t));
    return h;
}

PcaBasis fit_pca(std::span<const Vector> points) {
    if (points.empty()) throw std::invalid_argument("fit_pca: no points");
    const Index dim = points[0].size();
    if (dim < 2) throw std::invalid_argument("fit_pca: dimension must be at least 2");
    const auto n = static_cast<Index>(points.size());

    Eigen::MatrixXd m(n, dim);
    for (Index r = 0; r < n; ++r) {
        if (points[r].size() != dim) throw DimensionError("fit_pca: points differ in dimension");
        m.row(r) = points[r].transpose();
    }
    PcaBasis basis;
    basis.center = m.colwise().mean().transpose();
    m.rowwise() -= basis.center.transpose();
    basis.directions = Eigen::MatrixXd::Zero(dim, 2);

    const double total = m.squaredNorm();
    if (total == 0.0) return basis;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const Vector sv = svd.singularValues();
    const Index kept = std::min<Index>(2, sv.size());
    double energy = 0.0;
    for (Index k = 0; k < sv.size(); ++k) energy += sv[k] * sv[k];
    for (Index k = 0; k < kept; ++k) {
        Vector dir = svd.matrixV().col(k);
        for (Index j = 0; j < dim; ++j) {
            if (std::abs(dir[j]) > 1e-14) {
                if (dir[j] < 0.0) dir = -dir;
                break;
            }
        }
        basis.directions.col(k) = dir;
    }
    basis.explained_variance.first = sv[0] * sv[0] / energy;
    basis.explained_variance.second = kept > 1 ? sv[1] * sv[1] / energy : 0.0;
    return basis;
}

std::vector<std::pair<double, double>> project(const PcaBasis& basis, std::span<const Vector> points) {
    std::vector<std::pair<double, double>> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != basis.center.size()) throw DimensionError("project: point dimension does not match basis");
        const Vector c = p - basis.center;
        out.emplace_back(c.dot(basis.directions.col(0)), c.dot(basis.directions.col(1)));
    }
    return out;
}

TrajectoryProjection pca_project(const Trajectory& traj) {
    if (traj.states.size() < 3) throw std::invalid_argument("pca_project: needs at least 3 states");
    std::vector<Vector> pts;
    pts.reserve(traj.states.size());
    for (const auto& s : traj.states) pts.push_back(s.value);
    const PcaBasis basis = fit_pca(pts);
    return {project(basis, pts), basis.explained_variance};
}

double path_length(std::span<const std::pair<double, double>> points) {
    double len = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        len += std::hypot(points[i].first - points[i - 1].first, points[i].second - points[i - 1].second);
    return len;
}

double empirical_order(std::span<const std::pair<std::size_t, double>> errors) {
    if (errors.size() < 3) throw std::invalid_argument("empirical_order: needs at least 3 (nfe, err) pairs");
    std::set<std::size_t> seen;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [nfe, err] : errors) {
        if (nfe == 0) throw std::invalid_argument("empirical_order: nfe must be positive");
        if (!(err > 0.0) || !std::isfinite(err)) throw std::invalid_argument("empirical_order: errors must be positive");
        if (!seen.insert(nfe).second) throw std::invalid_argument("empirical_order: duplicate nfe");
        const double x = -std::log(static_cast<double>(nfe));
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(errors.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double rmse(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "rmse");
    if (a.size() == 0) throw std::invalid_argument("rmse: empty vectors");
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

double rmse(const Trajectory& a, const Trajectory& b) {
    if (a.states.size() != b.states.size() || a.states.empty())
        throw DimensionError("rmse: trajectories differ in length");
    double sum = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        require_same_dim(a.states[i].value, b.states[i].value, "rmse");
        sum += (a.states[i].value - b.states[i].value).squaredNorm();
        count += static_cast<double>(a.states[i].value.size());
    }
    return std::sqrt(sum / count);
}

}  // namespace mrs
