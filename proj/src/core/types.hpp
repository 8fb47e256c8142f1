// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace mrs {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Operand vectors disagree in length.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A NaN or Inf appeared while sampling.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

inline void require_same_dim(const Vector& a, const Vector& b, const char* where) {
    if (a.size() != b.size())
        throw DimensionError(std::string(where) + ": dimension mismatch (" + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
}

}  // namespace mrs
