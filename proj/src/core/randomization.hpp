#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "estimators.hpp"
#include "finite_population.hpp"

namespace sharpvar {

/// All randomness flows through 64-bit Mersenne Twister streams (19937-bit
/// state). Stream `s` of seed `x` is seeded by std::seed_seq over the 32-bit
/// words {lo(x), hi(x), lo(s), hi(s), 0x73767221}.
using Rng = std::mt19937_64;

Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform integer in [lo, hi], platform independent.
std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);

/// Indices are 0-based and sorted ascending within each arm.
struct Assignment {
  std::vector<std::size_t> treated;
  std::vector<std::size_t> control;

  /// treated united with control, sorted.
  std::vector<std::size_t> sampled() const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Uniform draw over all C(N,n) C(n,m) assignments by a partial Fisher-Yates
/// shuffle of the N unit indices.
Assignment draw_assignment(const ExperimentDesign& design, Rng& rng);

inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;

/// C(N,n) C(n,m), saturating at UINT64_MAX.
std::uint64_t assignment_count(const ExperimentDesign& design);

/// Calls `visit(const Assignment&)` once per assignment: sampled sets in
/// lexicographic order, and within each, treated subsets in lexicographic
/// order. TooLarge beyond kEnumerationLimit.
template <class Visitor>
void for_each_assignment(const ExperimentDesign& design, Visitor&& visit);

std::vector<Assignment> enumerate_assignments(const ExperimentDesign& design);

/// Observed arms under an assignment: y1 of treated units, y0 of controls.
ObservedExperiment observe(const PotentialOutcomeTable& table, const ExperimentDesign& design,
                           const Assignment& assignment);

struct ExactMoments {
  std::uint64_t assignments = 0;
  double mean_tau_hat = 0.0;
  double variance_tau_hat = 0.0;
  double mean_s2_y1_hat = 0.0;
  double mean_s2_y0_hat = 0.0;
  double mean_v_a = 0.0;
  double mean_v_b_plus = 0.0;
  double mean_v_b_minus = 0.0;
  double mean_v_high = 0.0;
  double mean_v_low = 0.0;
};

/// Expectations over the full enumeration of assignments.
ExactMoments exact_moments(const PotentialOutcomeTable& table, const ExperimentDesign& design);

// ---------------------------------------------------------------------------

namespace detail {

// Advances a sorted k-combination of {0..n-1}; false after the last one.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void check_enumerable(const ExperimentDesign& design);

}  // namespace detail

template <class Visitor>
void for_each_assignment(const ExperimentDesign& design, Visitor&& visit) {
  detail::check_enumerable(design);
  const auto big_n = static_cast<std::size_t>(design.population().count());
  const std::size_t n = design.sample_size();
  const std::size_t m = design.treated();

  std::vector<std::size_t> sampled(n);
  for (std::size_t i = 0; i < n; ++i) sampled[i] = i;
  Assignment a;
  a.treated.resize(m);
  a.control.resize(n - m);
  do {
    std::vector<std::size_t> pick(m);
    for (std::size_t i = 0; i < m; ++i) pick[i] = i;
    do {
      std::size_t t = 0, c = 0;
      for (std::size_t pos = 0; pos < n; ++pos) {
        if (t < m && pick[t] == pos) a.treated[t++] = sampled[pos];
        else a.control[c++] = sampled[pos];
      }
      visit(static_cast<const Assignment&>(a));
    } while (detail::next_combination(pick, n));
  } while (detail::next_combination(sampled, big_n));
}

}  // namespace sharpvar
