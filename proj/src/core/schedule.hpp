// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace mrs {

enum class ScheduleFamily { Constant, Linear, Cosine };

std::string_view to_string(ScheduleFamily family);

/// Coefficients of the mean-reverting SDE dx = f(t)(mu - x)dt + g(t)dw with
/// g^2 = 2 sigma_inf^2 f. Each family carries a closed-form integral of f, so
/// alpha, sigma and lambda are exact up to rounding.
///
/// Values are immutable after construction.
class Schedule {
public:
    /// f(t) = theta.
    static Schedule constant(double theta, double sigma_inf, double t_max);
    /// f(t) = theta_start + (theta_end - theta_start) t / T.
    static Schedule linear(double theta_start, double theta_end, double sigma_inf, double t_max);
    /// f(t) = theta_min + (theta_max - theta_min) (1 - cos(pi t / T)) / 2.
    static Schedule cosine(double theta_min, double theta_max, double sigma_inf, double t_max);

    ScheduleFamily family() const noexcept { return family_; }
    double sigma_inf() const noexcept { return sigma_inf_; }
    double t_max() const noexcept { return t_max_; }
    double theta_a() const noexcept { return theta_a_; }
    double theta_b() const noexcept { return theta_b_; }

    /// Mean-reversion speed f(t).
    double theta(double t) const;
    /// Integral of f over [0, t].
    double theta_integral(double t) const;

    double alpha(double t) const;
    double sigma(double t) const;
    /// Half log-SNR log(alpha / sigma). Diverges at t = 0, which is rejected.
    double lambda(double t) const;
    /// Inverse of lambda(). Closed form for the constant family, bisection
    /// on the integral of f otherwise.
    double t_of_lambda(double lam) const;
    double g_squared(double t) const;

    /// 1 - alpha_t^2 without cancellation near t = 0.
    double one_minus_alpha_sq(double t) const;

private:
    Schedule(ScheduleFamily family, double a, double b, double sigma_inf, double t_max);

    void check_time(double t) const;
    double integral_unchecked(double t) const;

    ScheduleFamily family_;
    double theta_a_;
    double theta_b_;
    double sigma_inf_;
    double t_max_;
};

enum class Spacing { UniformT, UniformLambda };

std::string_view to_string(Spacing spacing);

/// Strictly decreasing sampling times t_0 = T > t_1 > ... > t_M = t_end.
struct TimeGrid {
    std::vector<double> times;
    Spacing spacing = Spacing::UniformLambda;
    double t_end = 0.0;

    std::size_t nfe() const noexcept { return times.empty() ? 0 : times.size() - 1; }
};

TimeGrid make_grid(const Schedule& schedule, std::size_t nfe, Spacing spacing, double t_end);

/// Every `stride`-th point of `fine`; the result nests exactly in `fine`.
TimeGrid subsample_grid(const TimeGrid& fine, std::size_t stride);

/// Default terminal time, 1e-3 of the horizon.
inline double default_t_end(const Schedule& schedule) { return 1e-3 * schedule.t_max(); }

}  // namespace mrs
