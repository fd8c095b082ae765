#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "normal.hpp"
#include "numeric.hpp"

namespace sharpvar {

namespace {

ExperimentDesign make_design(std::size_t m, std::size_t k, std::optional<PopulationSize> population) {
  if (m < 2) fail(ErrorCode::InvalidDesign, "treated arm has " + std::to_string(m) + " unit(s); at least 2 required");
  if (k < 2) fail(ErrorCode::InvalidDesign, "control arm has " + std::to_string(k) + " unit(s); at least 2 required");
  return {population.value_or(PopulationSize::finite(m + k)), m + k, m};
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::stable_sort(out.begin(), out.end());
  return out;
}

double sum_of_squares(std::span<const double> v, double mean) {
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i] - mean;
  return pairwise_dot(d, d);
}

double cochran_from_ss(double ss, std::size_t k, PopulationSize population) {
  const double km1 = static_cast<double>(k) - 1.0;
  if (population.is_infinite()) return ss / km1;
  const auto big_n = static_cast<double>(population.count());
  return (big_n - 1.0) / (big_n * km1) * ss;
}

struct ArmMoments {
  double mean;
  double s2;  // Cochran
};

ArmMoments arm_moments(std::span<const double> sorted, PopulationSize population) {
  const double mean = population_mean(sorted);
  return {mean, cochran_from_ss(sum_of_squares(sorted, mean), sorted.size(), population)};
}

double clamp_nonnegative(double v, std::uint32_t flag, std::uint32_t& flags) {
  if (v < 0.0) {
    flags |= flag;
    return 0.0;
  }
  return v;
}

VarianceEstimateSet estimate_sorted(std::span<const double> ts, std::span<const double> cs,
                                    const ExperimentDesign& design,
                                    const QuantilePartition& partition) {
  VarianceEstimateSet out;
  out.design = design;
  const PopulationSize population = design.population();
  const auto t = arm_moments(ts, population);
  const auto c = arm_moments(cs, population);
  const auto m = static_cast<double>(design.treated());
  const auto k = static_cast<double>(design.control());
  const auto n = static_cast<double>(design.sample_size());

  out.tau_hat = t.mean - c.mean;
  out.s2_y1_hat = t.s2;
  out.s2_y0_hat = c.s2;

  const Interval cov = sharp_covariance_bounds_sorted(ts, cs, partition);
  out.cov_low_hat = cov.lower;
  out.cov_high_hat = cov.upper;

  const double v_a = n / (n - 1.0) * (t.s2 / m + c.s2 / k);
  const double common = k / m * t.s2 + m / k * c.s2;
  const double cross = 2.0 * std::sqrt(t.s2 * c.s2);
  const double v_b_plus = (common + cross) / (n - 1.0);
  const double v_b_minus = (common - cross) / (n - 1.0);

  double v_high;
  double v_low;
  if (population.is_infinite()) {
    v_high = v_low = t.s2 / m + c.s2 / k;
    out.infinite_population = true;
    out.neyman_heuristic = true;
  } else {
    const auto big_n = static_cast<double>(population.count());
    const double base = (big_n - m) / m * t.s2 + (big_n - k) / k * c.s2;
    v_high = (base + 2.0 * cov.upper) / (big_n - 1.0);
    v_low = (base + 2.0 * cov.lower) / (big_n - 1.0);
    out.neyman_heuristic = !design.is_census();
  }

  out.v_a = clamp_nonnegative(v_a, kClampVa, out.clamped);
  out.v_b_plus = clamp_nonnegative(v_b_plus, kClampVbPlus, out.clamped);
  out.v_b_minus = clamp_nonnegative(v_b_minus, kClampVbMinus, out.clamped);
  out.v_high = clamp_nonnegative(v_high, kClampVHigh, out.clamped);
  out.v_low = clamp_nonnegative(v_low, kClampVLow, out.clamped);
  return out;
}

}  // namespace

ObservedExperiment::ObservedExperiment(OutcomeVector treated, OutcomeVector control,
                                       std::optional<PopulationSize> population)
    : treated_(std::move(treated)),
      control_(std::move(control)),
      design_(make_design(treated_.size(), control_.size(), population)) {}

std::string_view to_string(VarianceBasis basis) noexcept {
  switch (basis) {
    case VarianceBasis::Conventional: return "v_a";
    case VarianceBasis::NeymanUpper: return "v_b_plus";
    case VarianceBasis::SharpUpper: return "v_high";
    case VarianceBasis::Custom: return "custom";
  }
  return "custom";
}

double difference_in_means(const ObservedExperiment& obs) {
  const auto ts = sorted_copy(obs.treated());
  const auto cs = sorted_copy(obs.control());
  return population_mean(ts) - population_mean(cs);
}

double cochran_variance(std::span<const double> arm, PopulationSize population) {
  if (arm.size() < 2) fail(ErrorCode::InvalidDesign, "Cochran variance needs at least 2 units");
  if (!population.is_infinite() && population.count() < arm.size()) {
    fail(ErrorCode::InvalidDesign, "population smaller than the arm");
  }
  const auto sorted = sorted_copy(arm);
  return arm_moments(sorted, population).s2;
}

double neyman_conservative(const ObservedExperiment& obs) { return estimate_all(obs).v_a; }

Interval neyman_bounds(const ObservedExperiment& obs) {
  const auto est = estimate_all(obs);
  return {est.v_b_minus, est.v_b_plus};
}

Interval sharp_covariance_bounds(const ObservedExperiment& obs) {
  const auto ts = sorted_copy(obs.treated());
  const auto cs = sorted_copy(obs.control());
  return sharp_covariance_bounds_sorted(ts, cs, build_partition(ts.size(), cs.size()));
}

Interval sharp_covariance_bounds_sorted(std::span<const double> ts, std::span<const double> cs,
                                        const QuantilePartition& partition) {
  if (partition.first_count() != ts.size() || partition.second_count() != cs.size()) {
    fail(ErrorCode::InvalidInput, "partition does not match arm sizes");
  }
  const double mt = population_mean(ts);
  const double mc = population_mean(cs);
  const std::size_t segments = partition.segments();
  // Centred products: sum w_i (a_i - mt)(b_i - mc) equals sum w_i a_i b_i - mt mc
  // because the partition refines both grids.
  std::vector<double> high(segments), low(segments);
  for (std::size_t i = 1; i <= segments; ++i) {
    const double w = partition.weight_value(i);
    const double a = ts[partition.first_index(i) - 1] - mt;
    const double b_same = cs[partition.second_index(i) - 1] - mc;
    const double b_opposite = cs[partition.second_index(segments + 1 - i) - 1] - mc;
    high[i - 1] = w * a * b_same;
    low[i - 1] = w * a * b_opposite;
  }
  return {pairwise_sum(low), pairwise_sum(high)};
}

Interval sharp_variance_bounds(const ObservedExperiment& obs) {
  if (obs.design().is_infinite()) {
    fail(ErrorCode::InvalidDesign, "sharp bounds need a finite population; use the infinite-population variance");
  }
  const auto est = estimate_all(obs);
  return {est.v_low, est.v_high};
}

double infinite_population_variance(const ObservedExperiment& obs) {
  if (!obs.design().is_infinite()) {
    fail(ErrorCode::InvalidDesign, "infinite-population variance requires N declared infinite");
  }
  return estimate_all(obs).v_high;
}

VarianceEstimateSet estimate_all(const ObservedExperiment& obs) {
  return estimate_all(obs, build_partition(obs.design().treated(), obs.design().control()));
}

VarianceEstimateSet estimate_all(const ObservedExperiment& obs, const QuantilePartition& partition) {
  const auto ts = sorted_copy(obs.treated());
  const auto cs = sorted_copy(obs.control());
  return estimate_sorted(ts, cs, obs.design(), partition);
}

ConfidenceInterval wald_interval(double tau_hat, double variance, double level, VarianceBasis basis) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    fail(ErrorCode::InvalidInput, "variance estimate must be finite and nonnegative");
  }
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::InvalidInput, "confidence level must lie in (0, 1)");
  const double z = inverse_normal_cdf(0.5 + level / 2.0);
  return {tau_hat, z * std::sqrt(variance), level, basis};
}

}  // namespace sharpvar
