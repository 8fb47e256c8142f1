// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/random.hpp"

#include <cmath>

namespace mrs {

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomSource::RandomSource(std::uint64_t master_seed, std::uint64_t stream)
    : engine_(mix_seed(master_seed, stream)) {}

double RandomSource::uniform() {
    // 53 random bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

Vector RandomSource::normal_vector(Index dim) {
    Vector z(dim);
    for (Index i = 0; i < dim; ++i) z[i] = normal();
    return z;
}

}  // namespace mrs
