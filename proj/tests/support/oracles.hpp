// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations for the tests, built from the schedule's f(t), its
// integral and sigma_inf plus standard numerics (adaptive quadrature, an
// adaptive Runge-Kutta integrator, finite differences). None of it calls the
// library's step, transform or moment formulas.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "core/schedule.hpp"
#include "core/types.hpp"

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-13, &err);
}

/// exp(-integral_0^t f), with the integral taken by quadrature of theta().
inline double alpha(const mrs::Schedule& s, double t) {
    if (t == 0.0) return 1.0;
    return std::exp(-integrate([&](double u) { return s.theta(u); }, 0.0, t));
}

inline double sigma(const mrs::Schedule& s, double t) {
    const double a = alpha(s, t);
    return s.sigma_inf() * std::sqrt(1.0 - a * a);
}

inline double g2(const mrs::Schedule& s, double t) { return 2.0 * s.sigma_inf() * s.sigma_inf() * s.theta(t); }

// Reverse-time dynamics dx/dt = A(t) x + B(t) (+ g dw) stepped from t_prev
// down to t_next < t_prev:
//   x_next = Phi x_prev - int_{t_next}^{t_prev} Phi(t_next, tau) B(tau) dtau
// with Phi(t_next, tau) = exp(-int_{t_next}^{tau} A).

/// Exact one-step propagator of dx/dt = A(t) x over [t_next, t_prev], i.e.
/// exp(-integral_{t_next}^{t_prev} A).
inline double propagator(const std::function<double(double)>& A, double t_prev, double t_next) {
    return std::exp(-integrate(A, t_next, t_prev));
}

/// Integral over tau in [t_next, t_prev] of Phi(t_next, tau) * c(tau), where
/// Phi is the propagator of dx/dt = A from tau down to t_next. This is the
/// response of the state at t_next to a forcing -c(tau) dt accumulated while
/// moving backward in time.
inline double forced_response(const std::function<double(double)>& A, const std::function<double(double)>& c,
                              double t_prev, double t_next) {
    return integrate([&](double tau) { return propagator(A, tau, t_next) * c(tau); }, t_next, t_prev);
}

/// Variance accumulated at t_next from white noise of intensity g2 on
/// [t_next, t_prev] under the propagator of A.
inline double injected_variance(const mrs::Schedule& s, const std::function<double(double)>& A, double t_prev,
                                double t_next) {
    return integrate(
        [&](double tau) {
            const double p = propagator(A, tau, t_next);
            return p * p * g2(s, tau);
        },
        t_next, t_prev);
}

/// Terminal mean and variance (isotropic) of the reverse SDE (stochastic) or
/// PF-ODE driven by the exact score of a point mass at x0, started from
/// N(mu, sigma_inf^2 I) at T and integrated to t_end with dopri5.
struct Moments {
    std::vector<double> mean;
    double var = 0.0;
};

inline Moments dirac_reverse_moments(const mrs::Schedule& s, bool stochastic, const std::vector<double>& x0,
                                     const std::vector<double>& mu, double t_end) {
    using namespace boost::numeric::odeint;
    const double k = stochastic ? 1.0 : 0.5;
    const std::size_t d = x0.size();
    // State: mean[0..d), var. Independent variable tau = T - t.
    using State = std::vector<double>;
    const double T = s.t_max();
    auto rhs = [&](const State& y, State& dy, double tau) {
        const double t = T - tau;
        const double f = s.theta(t);
        const double a = std::exp(-s.theta_integral(t));
        const double sg2 = s.sigma_inf() * s.sigma_inf() * (1.0 - a * a);
        const double gg = g2(s, t);
        // dx/dt = f (mu - x) + k g^2 / sigma^2 (x - a x0 - (1 - a) mu); dt = -dtau.
        for (std::size_t i = 0; i < d; ++i) {
            const double drift = f * (mu[i] - y[i]) + k * gg / sg2 * (y[i] - a * x0[i] - (1.0 - a) * mu[i]);
            dy[i] = -drift;
        }
        const double lin = -f + k * gg / sg2;  // d drift / dx
        dy[d] = -2.0 * lin * y[d] + (stochastic ? gg : 0.0);
    };
    State y(d + 1);
    for (std::size_t i = 0; i < d; ++i) y[i] = mu[i];
    y[d] = s.sigma_inf() * s.sigma_inf();
    integrate_adaptive(make_controlled(1e-13, 1e-13, runge_kutta_dopri5<State>()), rhs, y, 0.0, T - t_end, 1e-4);
    Moments m;
    m.mean.assign(y.begin(), y.begin() + static_cast<long>(d));
    m.var = y[d];
    return m;
}

inline std::vector<double> to_std(const mrs::Vector& v) { return {v.data(), v.data() + v.size()}; }

/// log N(x; m, v I) up to the normalizing constant.
inline double gaussian_log_density(const mrs::Vector& x, const mrs::Vector& m, double v) {
    return -0.5 * (x - m).squaredNorm() / v - 0.5 * static_cast<double>(x.size()) * std::log(v);
}

/// Central finite-difference gradient.
inline mrs::Vector fd_gradient(const std::function<double(const mrs::Vector&)>& f, const mrs::Vector& x,
                               double step = 1e-5) {
    mrs::Vector g(x.size());
    for (mrs::Index i = 0; i < x.size(); ++i) {
        mrs::Vector p = x;
        mrs::Vector q = x;
        p[i] += step;
        q[i] -= step;
        g[i] = (f(p) - f(q)) / (2.0 * step);
    }
    return g;
}

}  // namespace oracle
