// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/random.hpp"
#include "core/schedule.hpp"
#include "core/types.hpp"

namespace mrs {

/// A sample x_t together with the mean mu it reverts toward.
struct StateVec {
    Vector x;
    Vector mu;
    double t = 0.0;
};

struct TransitionMoments {
    Vector mean;
    double std = 0.0;  // isotropic
};

/// Moments of p(x_t | x_0): mean alpha_t x0 + (1 - alpha_t) mu, std sigma_t.
TransitionMoments transition_moments(const Schedule& schedule, const Vector& x0, const Vector& mu, double t);

/// x_t for a given standard-normal draw z (the reparameterized forward map).
Vector forward_from_noise(const Schedule& schedule, const Vector& x0, const Vector& mu, double t, const Vector& z);

/// Draws x_t ~ p(x_t | x_0) using `rng`.
Vector forward_sample(const Schedule& schedule, const Vector& x0, const Vector& mu, double t, RandomSource& rng);

}  // namespace mrs
