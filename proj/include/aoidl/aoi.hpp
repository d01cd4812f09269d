#pragma once

#include <cstdint>

#include "aoidl/markov.hpp"

namespace aoidl {

struct AoiParams {
    double update_success_prob = 0.0;  // mu2

    void validate() const;
};

/// Stationary P{A = i}, i >= 1: geometric with success probability mu2.
double aoi_pmf(const AoiParams& p, std::int64_t i);

/// 1/mu2; +infinity when mu2 == 0 (the age grows without bound).
double average_aoi(const AoiParams& p);

/// P{A > x} = (1 - mu2)^x for x >= 0.
double aoi_violation(const AoiParams& p, std::int64_t x);

/// The age chain truncated to n states. Ages 1..n-1 are exact; state n
/// absorbs every age >= n through a self-loop of weight 1 - mu2.
StochasticMatrix build_aoi_matrix_truncated(const AoiParams& p, int n);

}  // namespace aoidl
