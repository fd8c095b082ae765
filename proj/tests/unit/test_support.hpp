#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "finite_population.hpp"

namespace sharpvar::testing {

inline std::mt19937_64 test_rng(std::uint64_t salt) { return std::mt19937_64(0x5eed0000u + salt); }

/// Values on a coarse grid so ties happen often.
inline std::vector<double> random_outcomes(std::mt19937_64& rng, std::size_t count, int levels = 7) {
  std::uniform_int_distribution<int> pick(0, levels - 1);
  std::vector<double> v(count);
  for (auto& x : v) x = 0.5 * pick(rng) - 1.0;
  return v;
}

inline std::vector<double> random_reals(std::mt19937_64& rng, std::size_t count) {
  std::normal_distribution<double> normal(0.0, 2.0);
  std::vector<double> v(count);
  for (auto& x : v) x = normal(rng);
  return v;
}

inline PotentialOutcomeTable random_table(std::mt19937_64& rng, std::size_t count) {
  return {OutcomeVector(random_reals(rng, count)), OutcomeVector(random_reals(rng, count))};
}

inline double relative_error(double got, double want) {
  const double scale = std::max(1.0, std::abs(want));
  return std::abs(got - want) / scale;
}

// Textbook two-pass moments, independent of the library's pairwise reductions.
inline double naive_mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

inline double naive_covariance(const std::vector<double>& v, const std::vector<double>& w) {
  const long double mv = naive_mean(v), mw = naive_mean(w);
  long double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - mv) * (w[i] - mw);
  return static_cast<double>(s / v.size());
}

}  // namespace sharpvar::testing
