#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sharpvar {

/// Finite outcomes for a set of units. Non-empty and free of NaN/inf.
class OutcomeVector {
 public:
  explicit OutcomeVector(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  operator std::span<const double>() const noexcept { return values_; }

  friend bool operator==(const OutcomeVector&, const OutcomeVector&) = default;

 private:
  std::vector<double> values_;
};

/// Both potential outcomes for every unit of a finite population.
class PotentialOutcomeTable {
 public:
  PotentialOutcomeTable(OutcomeVector y1, OutcomeVector y0);

  const OutcomeVector& y1() const noexcept { return y1_; }
  const OutcomeVector& y0() const noexcept { return y0_; }
  std::size_t size() const noexcept { return y1_.size(); }

  friend bool operator==(const PotentialOutcomeTable&, const PotentialOutcomeTable&) = default;

 private:
  OutcomeVector y1_;
  OutcomeVector y0_;
};

/// Population size: a unit count or the distinguished infinite state.
class PopulationSize {
 public:
  static PopulationSize finite(std::uint64_t count) { return PopulationSize(count); }
  static PopulationSize infinite() { return PopulationSize(std::nullopt); }

  bool is_infinite() const noexcept { return !count_.has_value(); }
  /// Throws InvalidDesign when infinite.
  std::uint64_t count() const;

  friend bool operator==(const PopulationSize&, const PopulationSize&) = default;

 private:
  explicit PopulationSize(std::optional<std::uint64_t> count) : count_(count) {}
  std::optional<std::uint64_t> count_;
};

/// (N, n, m) for complete randomization: n of N units sampled, m of those
/// treated. Construction enforces m >= 2, n - m >= 2 and n <= N.
class ExperimentDesign {
 public:
  ExperimentDesign(PopulationSize population, std::size_t sample_size, std::size_t treated);

  static ExperimentDesign census(std::size_t n, std::size_t m) {
    return {PopulationSize::finite(n), n, m};
  }

  PopulationSize population() const noexcept { return population_; }
  std::size_t sample_size() const noexcept { return sample_size_; }
  std::size_t treated() const noexcept { return treated_; }
  std::size_t control() const noexcept { return sample_size_ - treated_; }
  bool is_infinite() const noexcept { return population_.is_infinite(); }
  /// n == N.
  bool is_census() const noexcept;

  friend bool operator==(const ExperimentDesign&, const ExperimentDesign&) = default;

 private:
  PopulationSize population_;
  std::size_t sample_size_;
  std::size_t treated_;
};

// Divisor-N population moments. All reductions are pairwise.
double population_mean(std::span<const double> v);
double population_variance(std::span<const double> v);
double population_covariance(std::span<const double> v, std::span<const double> w);

/// Var(tau_hat) over all C(N,n)C(n,m) assignments. Requires a finite design
/// whose N matches the table.
double true_variance(const PotentialOutcomeTable& table, const ExperimentDesign& design);
double true_average_effect(const PotentialOutcomeTable& table);

}  // namespace sharpvar
