#include "coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"
#include "numeric.hpp"
#include "partition.hpp"

namespace sharpvar {

QuantileFunction QuantileFunction::step(std::span<const double> atoms) {
  if (atoms.empty()) fail(ErrorCode::InvalidInput, "step quantile needs at least one atom");
  QuantileFunction q;
  q.atoms_.assign(atoms.begin(), atoms.end());
  std::stable_sort(q.atoms_.begin(), q.atoms_.end());
  return q;
}

QuantileFunction QuantileFunction::analytic(std::function<double(double)> inverse) {
  if (!inverse) fail(ErrorCode::InvalidInput, "analytic quantile function is empty");
  QuantileFunction q;
  q.analytic_ = std::move(inverse);
  return q;
}

double QuantileFunction::operator()(double u) const {
  if (analytic_) return analytic_(u);
  const auto k = static_cast<double>(atoms_.size());
  auto idx = static_cast<std::size_t>(std::ceil(k * u));
  idx = std::clamp<std::size_t>(idx, 1, atoms_.size());
  return atoms_[idx - 1];
}

namespace {

Interval step_integrals(const QuantileFunction& g, const QuantileFunction& f) {
  const QuantilePartition grid(g.atoms().size(), f.atoms().size());
  const std::size_t segments = grid.segments();
  std::vector<double> same(segments), opposite(segments);
  for (std::size_t i = 1; i <= segments; ++i) {
    const Rational lo = grid.breakpoint(i - 1);
    const Rational hi = grid.breakpoint(i);
    // Both step functions are constant on (lo, hi]; sample strictly inside.
    const double mid = boost::rational_cast<double>((lo + hi) / 2);
    const double w = boost::rational_cast<double>(hi - lo);
    same[i - 1] = w * g(mid) * f(mid);
    opposite[i - 1] = w * g(mid) * f(1.0 - mid);
  }
  return {pairwise_sum(opposite), pairwise_sum(same)};
}

Interval quadrature_integrals(const QuantileFunction& g, const QuantileFunction& f,
                              std::size_t grid_size) {
  if (grid_size == 0) fail(ErrorCode::InvalidInput, "quadrature grid must have at least one point");
  const auto k = static_cast<double>(grid_size);
  std::vector<double> same(grid_size), opposite(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double u = (static_cast<double>(j) + 0.5) / k;
    const double gu = g(u);
    const double fu = f(u);
    const double fo = f(1.0 - u);
    if (!std::isfinite(gu) || !std::isfinite(fu) || !std::isfinite(fo)) {
      fail(ErrorCode::NumericalFailure, "quantile function is not finite at u = " + std::to_string(u));
    }
    same[j] = gu * fu;
    opposite[j] = gu * fo;
  }
  return {pairwise_sum(opposite) / k, pairwise_sum(same) / k};
}

}  // namespace

Interval hoeffding_bounds(const QuantileFunction& g, const QuantileFunction& f, double mu_g,
                          double mu_f, std::size_t grid_size) {
  const Interval raw = (g.is_step() && f.is_step()) ? step_integrals(g, f)
                                                    : quadrature_integrals(g, f, grid_size);
  const double shift = mu_g * mu_f;
  if (!std::isfinite(raw.lower) || !std::isfinite(raw.upper)) {
    fail(ErrorCode::NumericalFailure, "quantile product integral diverged");
  }
  return {raw.lower - shift, raw.upper - shift};
}

Interval hoeffding_bounds(std::span<const double> treated, std::span<const double> control) {
  return hoeffding_bounds(QuantileFunction::step(treated), QuantileFunction::step(control),
                          population_mean(treated), population_mean(control));
}

std::pair<std::vector<double>, std::vector<double>> lcm_expand(std::span<const double> treated,
                                                               std::span<const double> control) {
  if (treated.empty() || control.empty()) fail(ErrorCode::InvalidInput, "cannot expand an empty arm");
  const std::size_t total = std::lcm(treated.size(), control.size());
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.reserve(total);
  out.second.reserve(total);
  for (double v : treated) out.first.insert(out.first.end(), total / treated.size(), v);
  for (double v : control) out.second.insert(out.second.end(), total / control.size(), v);
  return out;
}

Interval brute_force_extremes(std::span<const double> atoms_a, std::span<const double> atoms_b) {
  if (atoms_a.size() != atoms_b.size()) {
    fail(ErrorCode::InvalidInput, "brute-force coupling needs equal atom counts");
  }
  const std::size_t count = atoms_a.size();
  if (count == 0) fail(ErrorCode::InvalidInput, "brute-force coupling needs at least one atom");
  if (count > kBruteForceLimit) {
    fail(ErrorCode::TooLarge, std::to_string(count) + " atoms exceed the brute-force limit of " +
                                  std::to_string(kBruteForceLimit));
  }
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const auto len = static_cast<double>(count);
  double lo = INFINITY;
  double hi = -INFINITY;
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += atoms_a[i] * atoms_b[perm[i]];
    acc /= len;
    lo = std::min(lo, acc);
    hi = std::max(hi, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mean_a += atoms_a[i];
    mean_b += atoms_b[i];
  }
  const double shift = (mean_a / len) * (mean_b / len);
  return {lo - shift, hi - shift};
}

StepDistribution::StepDistribution(std::span<const double> atoms) : sorted_(atoms.begin(), atoms.end()) {
  if (sorted_.empty()) fail(ErrorCode::InvalidInput, "distribution needs at least one atom");
  std::sort(sorted_.begin(), sorted_.end());
}

double StepDistribution::operator()(double y) const noexcept {
  const auto below = std::upper_bound(sorted_.begin(), sorted_.end(), y) - sorted_.begin();
  return static_cast<double>(below) / static_cast<double>(sorted_.size());
}

double extremal_joint_cdf(CouplingKind kind, const StepDistribution& g, const StepDistribution& f,
                          double y1, double y0) noexcept {
  const double gv = g(y1);
  const double fv = f(y0);
  if (kind == CouplingKind::Comonotone) return std::min(gv, fv);
  return std::max(0.0, gv + fv - 1.0);
}

Interval sharp_variance_limits(const PotentialOutcomeTable& table, const ExperimentDesign& design) {
  if (design.population().count() != table.size()) {
    fail(ErrorCode::InvalidDesign, "design population size does not match table length");
  }
  const auto big_n = static_cast<double>(table.size());
  const auto m = static_cast<double>(design.treated());
  const auto k = static_cast<double>(design.control());
  const double base = (big_n - m) / m * population_variance(table.y1()) +
                      (big_n - k) / k * population_variance(table.y0());
  // Both marginals have N atoms, so the extremal couplings pair order statistics.
  std::vector<double> y1(table.y1().values().begin(), table.y1().values().end());
  std::vector<double> y0(table.y0().values().begin(), table.y0().values().end());
  std::sort(y1.begin(), y1.end());
  std::sort(y0.begin(), y0.end());
  const Interval cov = sharp_covariance_bounds_sorted(y1, y0, QuantilePartition(y1.size(), y0.size()));
  return {(base + 2.0 * cov.lower) / (big_n - 1.0), (base + 2.0 * cov.upper) / (big_n - 1.0)};
}

}  // namespace sharpvar
