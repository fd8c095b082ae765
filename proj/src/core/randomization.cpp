#include "randomization.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <boost/random/uniform_int_distribution.hpp>

#include "error.hpp"
#include "numeric.hpp"
#include "partition.hpp"

namespace sharpvar {

namespace {

constexpr std::uint32_t kStreamTag = 0x73767221u;

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::uint64_t factor = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

double mean_of(const std::vector<double>& v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    kStreamTag};
  return Rng(seq);
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return boost::random::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<std::size_t> Assignment::sampled() const {
  std::vector<std::size_t> out;
  out.reserve(treated.size() + control.size());
  std::merge(treated.begin(), treated.end(), control.begin(), control.end(), std::back_inserter(out));
  return out;
}

Assignment draw_assignment(const ExperimentDesign& design, Rng& rng) {
  const auto big_n = static_cast<std::size_t>(design.population().count());
  const std::size_t n = design.sample_size();
  const std::size_t m = design.treated();
  std::vector<std::size_t> units(big_n);
  for (std::size_t i = 0; i < big_n; ++i) units[i] = i;
  for (std::size_t i = 0; i < n; ++i) std::swap(units[i], units[uniform_index(rng, i, big_n - 1)]);

  Assignment a;
  a.treated.assign(units.begin(), units.begin() + static_cast<std::ptrdiff_t>(m));
  a.control.assign(units.begin() + static_cast<std::ptrdiff_t>(m), units.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(a.treated.begin(), a.treated.end());
  std::sort(a.control.begin(), a.control.end());
  return a;
}

std::uint64_t assignment_count(const ExperimentDesign& design) {
  const std::uint64_t outer = binomial_saturating(design.population().count(), design.sample_size());
  const std::uint64_t inner = binomial_saturating(design.sample_size(), design.treated());
  if (outer != 0 && inner > std::numeric_limits<std::uint64_t>::max() / outer) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return outer * inner;
}

void detail::check_enumerable(const ExperimentDesign& design) {
  const std::uint64_t count = assignment_count(design);
  if (count > kEnumerationLimit) {
    fail(ErrorCode::TooLarge, std::to_string(count) + " assignments exceed the enumeration limit of " +
                                  std::to_string(kEnumerationLimit));
  }
}

std::vector<Assignment> enumerate_assignments(const ExperimentDesign& design) {
  detail::check_enumerable(design);
  std::vector<Assignment> out;
  out.reserve(static_cast<std::size_t>(assignment_count(design)));
  for_each_assignment(design, [&](const Assignment& a) { out.push_back(a); });
  return out;
}

ObservedExperiment observe(const PotentialOutcomeTable& table, const ExperimentDesign& design,
                           const Assignment& assignment) {
  std::vector<double> yt, yc;
  yt.reserve(assignment.treated.size());
  yc.reserve(assignment.control.size());
  for (std::size_t i : assignment.treated) yt.push_back(table.y1()[i]);
  for (std::size_t i : assignment.control) yc.push_back(table.y0()[i]);
  return ObservedExperiment(OutcomeVector(std::move(yt)), OutcomeVector(std::move(yc)), design.population());
}

ExactMoments exact_moments(const PotentialOutcomeTable& table, const ExperimentDesign& design) {
  if (design.population().count() != table.size()) {
    fail(ErrorCode::InvalidDesign, "design population size does not match table length");
  }
  detail::check_enumerable(design);
  const auto partition = build_partition(design.treated(), design.control());
  std::vector<double> tau, s1, s0, va, vbp, vbm, vh, vl;
  for_each_assignment(design, [&](const Assignment& a) {
    const auto est = estimate_all(observe(table, design, a), partition);
    tau.push_back(est.tau_hat);
    s1.push_back(est.s2_y1_hat);
    s0.push_back(est.s2_y0_hat);
    va.push_back(est.v_a);
    vbp.push_back(est.v_b_plus);
    vbm.push_back(est.v_b_minus);
    vh.push_back(est.v_high);
    vl.push_back(est.v_low);
  });

  ExactMoments out;
  out.assignments = tau.size();
  out.mean_tau_hat = mean_of(tau);
  std::vector<double> sq(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double d = tau[i] - out.mean_tau_hat;
    sq[i] = d * d;
  }
  out.variance_tau_hat = mean_of(sq);
  out.mean_s2_y1_hat = mean_of(s1);
  out.mean_s2_y0_hat = mean_of(s0);
  out.mean_v_a = mean_of(va);
  out.mean_v_b_plus = mean_of(vbp);
  out.mean_v_b_minus = mean_of(vbm);
  out.mean_v_high = mean_of(vh);
  out.mean_v_low = mean_of(vl);
  return out;
}

}  // namespace sharpvar
