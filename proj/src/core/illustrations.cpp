#include "illustrations.hpp"

#include <array>
#include <cmath>
#include <map>
#include <utility>

#include "error.hpp"
#include "numeric.hpp"

namespace sharpvar {

namespace {

RatioResult ratios_from_grids(const BetaMarginal& treat, const BetaMarginal& control,
                              const std::vector<double>& treat_q, const std::vector<double>& control_q) {
  const std::size_t k = treat_q.size();
  RatioResult out;
  out.grid_size = k;
  out.s2_treat = treat.variance();
  out.s2_control = control.variance();
  out.cov_high = pairwise_dot(treat_q, control_q) / static_cast<double>(k) - treat.mean() * control.mean();
  const double spread = out.s2_treat + out.s2_control;
  const double upper = spread + 2.0 * out.cov_high;
  out.ratio_vs_conventional = upper / (2.0 * spread);
  out.ratio_vs_neyman_upper = upper / (spread + 2.0 * std::sqrt(out.s2_treat * out.s2_control));
  if (!std::isfinite(out.ratio_vs_conventional) || !std::isfinite(out.ratio_vs_neyman_upper)) {
    fail(ErrorCode::NumericalFailure, "ratio is not finite");
  }
  return out;
}

}  // namespace

std::vector<double> beta_quantile_grid(const BetaMarginal& marginal, std::size_t grid_size) {
  marginal.validate();
  if (grid_size == 0) fail(ErrorCode::InvalidInput, "grid size must be positive");
  std::vector<double> out(grid_size);
  const auto k = static_cast<double>(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    out[j] = beta_inverse_cdf(marginal, (static_cast<double>(j) + 0.5) / k);
  }
  return out;
}

RatioResult limiting_ratios(const BetaMarginal& treat, const BetaMarginal& control, std::size_t grid_size) {
  return ratios_from_grids(treat, control, beta_quantile_grid(treat, grid_size),
                           beta_quantile_grid(control, grid_size));
}

std::vector<IllustrationRow> table3_sweep(std::size_t grid_size) {
  constexpr std::array<BetaMarginal, 3> kControls = {{{0.1, 0.1}, {1.0, 1.0}, {2.0, 2.0}}};
  constexpr std::array<BetaMarginal, 6> kTreatments = {
      {{0.1, 0.1}, {0.1, 1.0}, {0.1, 2.0}, {1.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}}};

  std::map<std::pair<double, double>, std::vector<double>> grids;
  auto grid_for = [&](const BetaMarginal& b) -> const std::vector<double>& {
    auto key = std::make_pair(b.alpha, b.beta);
    auto it = grids.find(key);
    if (it == grids.end()) it = grids.emplace(key, beta_quantile_grid(b, grid_size)).first;
    return it->second;
  };

  std::vector<IllustrationRow> rows;
  rows.reserve(kControls.size() * kTreatments.size());
  int index = 1;
  for (const auto& control : kControls) {
    for (const auto& treat : kTreatments) {
      rows.push_back({index++, control, treat,
                      ratios_from_grids(treat, control, grid_for(treat), grid_for(control))});
    }
  }
  return rows;
}

}  // namespace sharpvar
