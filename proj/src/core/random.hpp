// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "core/types.hpp"

namespace mrs {

/// Seedable Gaussian source. Each chain owns one instance derived from
/// (master_seed, stream); instances must not be shared between threads.
///
/// Uniforms come from std::mt19937_64 (fully specified by the standard).
/// Normals use the Marsaglia polar method implemented here rather than
/// std::normal_distribution, whose algorithm is implementation-defined, so
/// sample streams are bit-stable across standard libraries.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t master_seed, std::uint64_t stream = 0);

    double uniform();  // in [0, 1)
    double normal();
    Vector normal_vector(Index dim);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer, used to decorrelate (seed, stream) pairs.
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream);

}  // namespace mrs
