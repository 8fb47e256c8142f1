// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/schedule.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace mrs {

namespace {

// log(1 + e^y) without overflow.
double softplus(double y) {
    return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
}

[[noreturn]] void throw_domain(const char* what, double t, double t_max) {
    std::ostringstream os;
    os << what << ": t = " << t << " outside [0, " << t_max << "]";
    throw std::domain_error(os.str());
}

}  // namespace

std::string_view to_string(ScheduleFamily family) {
    switch (family) {
        case ScheduleFamily::Constant: return "constant";
        case ScheduleFamily::Linear: return "linear";
        case ScheduleFamily::Cosine: return "cosine";
    }
    return "unknown";
}

std::string_view to_string(Spacing spacing) {
    switch (spacing) {
        case Spacing::UniformT: return "uniform_t";
        case Spacing::UniformLambda: return "uniform_lambda";
    }
    return "unknown";
}

Schedule::Schedule(ScheduleFamily family, double a, double b, double sigma_inf, double t_max)
    : family_(family), theta_a_(a), theta_b_(b), sigma_inf_(sigma_inf), t_max_(t_max) {
    if (!(sigma_inf > 0.0) || !std::isfinite(sigma_inf))
        throw std::invalid_argument("schedule: sigma_inf must be positive and finite");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw std::invalid_argument("schedule: t_max must be positive and finite");
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("schedule: theta parameters must be positive and finite");
    if (family != ScheduleFamily::Constant && (!(b > 0.0) || !std::isfinite(b)))
        throw std::invalid_argument("schedule: theta parameters must be positive and finite");
}

Schedule Schedule::constant(double theta, double sigma_inf, double t_max) {
    return Schedule(ScheduleFamily::Constant, theta, theta, sigma_inf, t_max);
}

Schedule Schedule::linear(double theta_start, double theta_end, double sigma_inf, double t_max) {
    return Schedule(ScheduleFamily::Linear, theta_start, theta_end, sigma_inf, t_max);
}

Schedule Schedule::cosine(double theta_min, double theta_max, double sigma_inf, double t_max) {
    return Schedule(ScheduleFamily::Cosine, theta_min, theta_max, sigma_inf, t_max);
}

void Schedule::check_time(double t) const {
    if (!(t >= 0.0 && t <= t_max_)) throw_domain("schedule", t, t_max_);
}

double Schedule::theta(double t) const {
    check_time(t);
    switch (family_) {
        case ScheduleFamily::Constant:
            return theta_a_;
        case ScheduleFamily::Linear:
            return theta_a_ + (theta_b_ - theta_a_) * t / t_max_;
        case ScheduleFamily::Cosine:
            return theta_a_ + 0.5 * (theta_b_ - theta_a_) * (1.0 - std::cos(std::numbers::pi * t / t_max_));
    }
    return theta_a_;
}

double Schedule::integral_unchecked(double t) const {
    switch (family_) {
        case ScheduleFamily::Constant:
            return theta_a_ * t;
        case ScheduleFamily::Linear:
            return theta_a_ * t + 0.5 * (theta_b_ - theta_a_) * t * t / t_max_;
        case ScheduleFamily::Cosine: {
            const double w = std::numbers::pi / t_max_;
            return theta_a_ * t + 0.5 * (theta_b_ - theta_a_) * (t - std::sin(w * t) / w);
        }
    }
    return theta_a_ * t;
}

double Schedule::theta_integral(double t) const {
    check_time(t);
    return integral_unchecked(t);
}

double Schedule::alpha(double t) const { return std::exp(-theta_integral(t)); }

double Schedule::one_minus_alpha_sq(double t) const { return -std::expm1(-2.0 * theta_integral(t)); }

double Schedule::sigma(double t) const { return sigma_inf_ * std::sqrt(one_minus_alpha_sq(t)); }

double Schedule::lambda(double t) const {
    if (!(t > 0.0 && t <= t_max_)) {
        std::ostringstream os;
        os << "lambda: t = " << t << " outside (0, " << t_max_ << "]";
        throw std::domain_error(os.str());
    }
    const double integral = integral_unchecked(t);
    return -integral - std::log(sigma_inf_) - 0.5 * std::log(-std::expm1(-2.0 * integral));
}

double Schedule::t_of_lambda(double lam) const {
    if (!std::isfinite(lam)) throw std::range_error("t_of_lambda: lambda is not finite");
    const double lam_min = lambda(t_max_);
    if (lam < lam_min - 1e-12 * std::max(1.0, std::abs(lam_min))) {
        std::ostringstream os;
        os << "t_of_lambda: lambda = " << lam << " below lambda(T) = " << lam_min;
        throw std::range_error(os.str());
    }
    if (lam <= lam_min) return t_max_;

    // lambda = log(alpha / sigma) gives 1 / alpha^2 = 1 + e^{-2 lambda} / sigma_inf^2.
    const double target = 0.5 * softplus(-2.0 * lam - 2.0 * std::log(sigma_inf_));
    if (!(target > 0.0)) throw std::range_error("t_of_lambda: lambda too large to represent a positive time");

    double t = 0.0;
    if (family_ == ScheduleFamily::Constant) {
        t = target / theta_a_;
    } else {
        auto residual = [&](double x) { return integral_unchecked(x) - target; };
        auto tolerance = [](double a, double b) {
            return b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
        };
        const auto bracket = boost::math::tools::bisect(residual, 0.0, t_max_, tolerance);
        t = 0.5 * (bracket.first + bracket.second);
    }
    if (!(t > 0.0)) throw std::range_error("t_of_lambda: lambda too large to represent a positive time");
    return std::min(t, t_max_);
}

double Schedule::g_squared(double t) const { return 2.0 * sigma_inf_ * sigma_inf_ * theta(t); }

TimeGrid make_grid(const Schedule& schedule, std::size_t nfe, Spacing spacing, double t_end) {
    const double t_max = schedule.t_max();
    if (nfe == 0) throw std::invalid_argument("make_grid: nfe must be at least 1");
    if (!(t_end > 0.0 && t_end < t_max))
        throw std::invalid_argument("make_grid: t_end must lie in (0, T)");

    TimeGrid grid;
    grid.spacing = spacing;
    grid.t_end = t_end;
    grid.times.resize(nfe + 1);
    grid.times.front() = t_max;
    grid.times.back() = t_end;

    const double n = static_cast<double>(nfe);
    if (spacing == Spacing::UniformT) {
        const double dt = (t_max - t_end) / n;
        for (std::size_t i = 1; i < nfe; ++i) grid.times[i] = t_max - static_cast<double>(i) * dt;
    } else {
        const double lam_start = schedule.lambda(t_max);
        const double lam_end = schedule.lambda(t_end);
        const double h = (lam_end - lam_start) / n;
        for (std::size_t i = 1; i < nfe; ++i)
            grid.times[i] = schedule.t_of_lambda(lam_start + static_cast<double>(i) * h);
    }
    for (std::size_t i = 1; i <= nfe; ++i) {
        if (!(grid.times[i] < grid.times[i - 1]))
            throw std::invalid_argument("make_grid: grid is not strictly decreasing; nfe too large for t_end");
    }
    return grid;
}

TimeGrid subsample_grid(const TimeGrid& fine, std::size_t stride) {
    if (stride == 0 || fine.nfe() % stride != 0)
        throw std::invalid_argument("subsample_grid: stride must divide the fine grid's step count");
    TimeGrid coarse;
    coarse.spacing = fine.spacing;
    coarse.t_end = fine.t_end;
    for (std::size_t i = 0; i < fine.times.size(); i += stride) coarse.times.push_back(fine.times[i]);
    return coarse;
}

}  // namespace mrs
