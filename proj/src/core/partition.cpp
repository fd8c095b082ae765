#include "partition.hpp"

#include <numeric>

#include "error.hpp"

namespace sharpvar {

namespace {

std::size_t ceil_div(std::int64_t num, std::int64_t den) {
  return static_cast<std::size_t>((num + den - 1) / den);
}

}  // namespace

QuantilePartition::QuantilePartition(std::size_t a, std::size_t b) : first_(a), second_(b) {
  if (a == 0 || b == 0) fail(ErrorCode::InvalidInput, "partition needs at least one atom per side");
  const auto sa = static_cast<std::int64_t>(a);
  const auto sb = static_cast<std::int64_t>(b);
  denominator_ = std::lcm(sa, sb);
  const std::int64_t step_a = denominator_ / sa;
  const std::int64_t step_b = denominator_ / sb;

  // Two-way merge of {k step_a} and {j step_b}, dropping coincident points.
  numerators_.reserve(a + b);
  std::int64_t next_a = 0;
  std::int64_t next_b = 0;
  while (next_a <= denominator_ || next_b <= denominator_) {
    const std::int64_t p = std::min(next_a, next_b);
    numerators_.push_back(p);
    if (next_a == p) next_a += step_a;
    if (next_b == p) next_b += step_b;
  }

  const std::size_t segments = numerators_.size() - 1;
  weights_.resize(segments);
  first_index_.resize(segments);
  second_index_.resize(segments);
  const auto den = static_cast<double>(denominator_);
  for (std::size_t i = 1; i <= segments; ++i) {
    weights_[i - 1] = static_cast<double>(numerators_[i] - numerators_[i - 1]) / den;
    // ceil(a * num / L) == ceil(num / step_a)
    first_index_[i - 1] = ceil_div(numerators_[i], step_a);
    second_index_[i - 1] = ceil_div(numerators_[i], step_b);
  }
}

std::vector<Rational> QuantilePartition::breakpoints() const {
  std::vector<Rational> out;
  out.reserve(numerators_.size());
  for (std::int64_t num : numerators_) out.emplace_back(num, denominator_);
  return out;
}

QuantilePartition build_partition(std::size_t treated, std::size_t control) {
  if (treated < 2 || control < 2) {
    fail(ErrorCode::InvalidDesign, "each arm needs at least 2 units");
  }
  return {treated, control};
}

}  // namespace sharpvar
