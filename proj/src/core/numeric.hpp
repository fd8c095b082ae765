#pragma once

#include <cstddef>
#include <span>

namespace sharpvar {

/// Pairwise (tree) summation over the stored order. Blocks of up to eight
/// elements are summed left to right; larger ranges split at the midpoint.
double pairwise_sum(std::span<const double> values) noexcept;

/// Sum of products a[i]*b[i], reduced pairwise. Spans must have equal size.
double pairwise_dot(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace sharpvar
