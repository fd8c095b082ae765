#pragma once

#include <cstddef>
#include <vector>

#include "beta.hpp"

namespace sharpvar {

struct RatioResult {
  double ratio_vs_conventional = 0.0;  // V^H / V^a
  double ratio_vs_neyman_upper = 0.0;  // V^H / V^{b+}
  std::size_t grid_size = 0;
  double s2_treat = 0.0;
  double s2_control = 0.0;
  double cov_high = 0.0;
};

struct IllustrationRow {
  int index = 0;  // 1-based
  BetaMarginal control;
  BetaMarginal treat;
  RatioResult result;
};

inline constexpr std::size_t kDefaultGridSize = 100000;

/// Quantiles at the midpoints (j + 1/2) / K, j = 0..K-1.
std::vector<double> beta_quantile_grid(const BetaMarginal& marginal, std::size_t grid_size);

/// Limiting upper-bound ratios for n = N, m = n/2 with Beta marginals:
///   V^H / V^a    = (S1 + S0 + 2 S_H) / (2 (S1 + S0))
///   V^H / V^{b+} = (S1 + S0 + 2 S_H) / (S1 + S0 + 2 sqrt(S1 S0))
/// with S1, S0 the closed-form Beta variances and S_H from midpoint quadrature.
RatioResult limiting_ratios(const BetaMarginal& treat, const BetaMarginal& control,
                            std::size_t grid_size = kDefaultGridSize);

/// The 18 scenarios: control in {(.1,.1), (1,1), (2,2)}, treatment over the
/// six unordered shape pairs from {0.1, 1, 2}, in fixed row order.
std::vector<IllustrationRow> table3_sweep(std::size_t grid_size = kDefaultGridSize);

}  // namespace sharpvar
