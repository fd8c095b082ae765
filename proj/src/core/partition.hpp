#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

namespace sharpvar {

using Rational = boost::rational<std::int64_t>;

/// Merged grid of the multiples of 1/a and 1/b on [0, 1].
///
/// Breakpoints are held as integer numerators over the common denominator
/// lcm(a, b), so every weight and order-statistic index is exact. Segment i
/// (1-based, i = 1..P) covers (p[i-1], p[i]]; on it the step quantile of an
/// a-atom sample is its ceil(a p[i])-th order statistic, likewise for b.
class QuantilePartition {
 public:
  /// a, b >= 1 atom counts.
  QuantilePartition(std::size_t a, std::size_t b);

  std::size_t first_count() const noexcept { return first_; }
  std::size_t second_count() const noexcept { return second_; }
  std::int64_t denominator() const noexcept { return denominator_; }

  /// P, the number of segments.
  std::size_t segments() const noexcept { return numerators_.size() - 1; }

  /// p_i for i = 0..P.
  Rational breakpoint(std::size_t i) const { return {numerators_[i], denominator_}; }
  std::vector<Rational> breakpoints() const;

  /// w_i = p_i - p_{i-1}, i = 1..P.
  Rational weight(std::size_t i) const {
    return {numerators_[i] - numerators_[i - 1], denominator_};
  }
  double weight_value(std::size_t i) const noexcept { return weights_[i - 1]; }

  /// ceil(a p_i) and ceil(b p_i); 1-based order-statistic indices, i >= 1.
  std::size_t first_index(std::size_t i) const noexcept { return first_index_[i - 1]; }
  std::size_t second_index(std::size_t i) const noexcept { return second_index_[i - 1]; }

 private:
  std::size_t first_;
  std::size_t second_;
  std::int64_t denominator_;
  std::vector<std::int64_t> numerators_;
  std::vector<double> weights_;
  std::vector<std::size_t> first_index_;
  std::vector<std::size_t> second_index_;
};

/// Partition for a treated arm of m units and a control arm of n - m units.
/// Both arms must hold at least two units.
QuantilePartition build_partition(std::size_t treated, std::size_t control);

}  // namespace sharpvar
