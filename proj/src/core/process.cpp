// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/process.hpp"

namespace mrs {

TransitionMoments transition_moments(const Schedule& schedule, const Vector& x0, const Vector& mu, double t) {
    require_same_dim(x0, mu, "transition_moments");
    const double a = schedule.alpha(t);
    return {a * x0 + (1.0 - a) * mu, schedule.sigma(t)};
}

Vector forward_from_noise(const Schedule& schedule, const Vector& x0, const Vector& mu, double t, const Vector& z) {
    require_same_dim(x0, z, "forward_from_noise");
    auto moments = transition_moments(schedule, x0, mu, t);
    if (moments.std == 0.0) return moments.mean;
    return moments.mean + moments.std * z;
}

Vector forward_sample(const Schedule& schedule, const Vector& x0, const Vector& mu, double t, RandomSource& rng) {
    require_same_dim(x0, mu, "forward_sample");
    const Vector z = rng.normal_vector(x0.size());
    return forward_from_noise(schedule, x0, mu, t, z);
}

}  // namespace mrs
