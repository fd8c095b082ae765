#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "estimators.hpp"
#include "finite_population.hpp"

namespace sharpvar {

/// Left-continuous inverse CDF on (0, 1]. Either a step function over a finite
/// set of atoms, G^{-1}(u) = y_(ceil(k u)), or an analytic inverse.
class QuantileFunction {
 public:
  static QuantileFunction step(std::span<const double> atoms);
  static QuantileFunction analytic(std::function<double(double)> inverse);

  bool is_step() const noexcept { return !analytic_; }
  /// Sorted atoms; empty for analytic quantiles.
  std::span<const double> atoms() const noexcept { return atoms_; }
  double operator()(double u) const;

 private:
  std::vector<double> atoms_;
  std::function<double(double)> analytic_;
};

inline constexpr std::size_t kDefaultQuadraturePoints = 100000;

/// (sigma_L, sigma_H): integral of G^{-1}(u) F^{-1}(1-u) resp. G^{-1}(u) F^{-1}(u)
/// over (0, 1), minus mu_g mu_f. Two step functions are integrated exactly
/// over their merged breakpoint grid; anything analytic uses midpoint
/// quadrature on `grid_size` points.
Interval hoeffding_bounds(const QuantileFunction& g, const QuantileFunction& f, double mu_g,
                          double mu_f, std::size_t grid_size = kDefaultQuadraturePoints);

/// Step marginals of the two arms, means taken as the arm means.
Interval hoeffding_bounds(std::span<const double> treated, std::span<const double> control);

/// Replicates every treated atom L/m times and every control atom L/(n-m)
/// times, L = lcm(m, n-m).
std::pair<std::vector<double>, std::vector<double>> lcm_expand(std::span<const double> treated,
                                                               std::span<const double> control);

inline constexpr std::size_t kBruteForceLimit = 8;

/// Min and max over all L! pairings of (1/L) sum a_i b_sigma(i), minus the
/// product of means. Equal lengths L <= 8, otherwise TooLarge.
Interval brute_force_extremes(std::span<const double> atoms_a, std::span<const double> atoms_b);

enum class CouplingKind { Comonotone, Countermonotone };

/// Empirical distribution function over a finite set of atoms.
class StepDistribution {
 public:
  explicit StepDistribution(std::span<const double> atoms);
  /// Fraction of atoms <= y. Accepts +-infinity.
  double operator()(double y) const noexcept;

 private:
  std::vector<double> sorted_;
};

/// Frechet-Hoeffding joint CDF: min{G, F} (comonotone) or max{0, G + F - 1}
/// (countermonotone) evaluated at (y1, y0).
double extremal_joint_cdf(CouplingKind kind, const StepDistribution& g, const StepDistribution& f,
                          double y1, double y0) noexcept;

/// Population-level sharp variance bounds (V^L, V^H) for a full table under a
/// finite design.
Interval sharp_variance_limits(const PotentialOutcomeTable& table, const ExperimentDesign& design);

}  // namespace sharpvar
