#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "finite_population.hpp"
#include "partition.hpp"

namespace sharpvar {

/// Outcomes of the treated (m units) and control (n - m units) arms plus the
/// declared population size. N defaults to n.
class ObservedExperiment {
 public:
  ObservedExperiment(OutcomeVector treated, OutcomeVector control,
                     std::optional<PopulationSize> population = std::nullopt);

  const OutcomeVector& treated() const noexcept { return treated_; }
  const OutcomeVector& control() const noexcept { return control_; }
  const ExperimentDesign& design() const noexcept { return design_; }

 private:
  OutcomeVector treated_;
  OutcomeVector control_;
  ExperimentDesign design_;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class VarianceBasis { Conventional, NeymanUpper, SharpUpper, Custom };

std::string_view to_string(VarianceBasis basis) noexcept;

struct ConfidenceInterval {
  double center = 0.0;
  double half_width = 0.0;
  double level = 0.95;
  VarianceBasis basis = VarianceBasis::Custom;

  double lower() const noexcept { return center - half_width; }
  double upper() const noexcept { return center + half_width; }
  /// Closed interval: boundary hits count as covered.
  bool covers(double value) const noexcept { return lower() <= value && value <= upper(); }

  friend bool operator==(const ConfidenceInterval&, const ConfidenceInterval&) = default;
};

/// Bits set in VarianceEstimateSet::clamped when an estimate fell below zero
/// through rounding and was reset to zero.
enum ClampFlag : std::uint32_t {
  kClampVa = 1u << 0,
  kClampVbPlus = 1u << 1,
  kClampVbMinus = 1u << 2,
  kClampVHigh = 1u << 3,
  kClampVLow = 1u << 4,
};

struct VarianceEstimateSet {
  double tau_hat = 0.0;
  double s2_y1_hat = 0.0;
  double s2_y0_hat = 0.0;
  double cov_high_hat = 0.0;
  double cov_low_hat = 0.0;
  double v_a = 0.0;
  double v_b_plus = 0.0;
  double v_b_minus = 0.0;
  double v_high = 0.0;
  double v_low = 0.0;
  ExperimentDesign design = ExperimentDesign::census(4, 2);

  std::uint32_t clamped = 0;
  /// n < N: the conventional and Neyman estimates use their n = N formulas.
  bool neyman_heuristic = false;
  /// N infinite: v_high and v_low both hold the independent-groups variance.
  bool infinite_population = false;

  friend bool operator==(const VarianceEstimateSet&, const VarianceEstimateSet&) = default;
};

double difference_in_means(const ObservedExperiment& obs);

/// (N - 1) / (N (k - 1)) * sum (y - ybar)^2 for an arm of k >= 2 units. An
/// infinite N gives the (k - 1)-divisor sample variance.
double cochran_variance(std::span<const double> arm, PopulationSize population);

/// Conventional estimate n/(n-1) {S1/m + S0/(n-m)}.
double neyman_conservative(const ObservedExperiment& obs);
/// Neyman's Cauchy-Schwarz bounds (lower, upper).
Interval neyman_bounds(const ObservedExperiment& obs);

/// Sharp covariance bounds (low, high) from the extremal couplings of the
/// two empirical marginals.
Interval sharp_covariance_bounds(const ObservedExperiment& obs);
/// Same, over arms already sorted ascending and a partition built for their sizes.
Interval sharp_covariance_bounds_sorted(std::span<const double> treated_sorted,
                                        std::span<const double> control_sorted,
                                        const QuantilePartition& partition);

/// Sharp variance bounds (low, high). Finite N only.
Interval sharp_variance_bounds(const ObservedExperiment& obs);

/// s1^2/m + s0^2/(n-m). Infinite N only.
double infinite_population_variance(const ObservedExperiment& obs);

/// Every estimate at once, sorting each arm a single time.
VarianceEstimateSet estimate_all(const ObservedExperiment& obs);
/// As above, reusing a partition built for (m, n - m).
VarianceEstimateSet estimate_all(const ObservedExperiment& obs, const QuantilePartition& partition);

/// tau_hat +- z_{1-alpha/2} sqrt(variance).
ConfidenceInterval wald_interval(double tau_hat, double variance, double level,
                                 VarianceBasis basis = VarianceBasis::Custom);

inline constexpr double kDefaultLevel = 0.95;

}  // namespace sharpvar
