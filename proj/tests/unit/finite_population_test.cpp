#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "error.hpp"
#include "finite_population.hpp"
#include "test_support.hpp"

namespace sharpvar {
namespace {

using testing::naive_covariance;
using testing::relative_error;
using testing::test_rng;

// Var(tau_hat) by brute force over every way to pick the treated and control
// sets, without touching the library's assignment machinery.
double enumerated_variance(const std::vector<double>& y1, const std::vector<double>& y0,
                           std::size_t n, std::size_t m) {
  const std::size_t big_n = y1.size();
  std::vector<double> estimates;
  // Each unit is 0 (unsampled), 1 (treated) or 2 (control).
  std::size_t total = 1;
  for (std::size_t i = 0; i < big_n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code, treated = 0, control = 0;
    double st = 0, sc = 0;
    for (std::size_t i = 0; i < big_n; ++i, c /= 3) {
      if (c % 3 == 1) { ++treated; st += y1[i]; }
      if (c % 3 == 2) { ++control; sc += y0[i]; }
    }
    if (treated == m && control == n - m) estimates.push_back(st / m - sc / (n - m));
  }
  const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / estimates.size();
  double ss = 0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  return ss / estimates.size();
}

TEST(OutcomeVector, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(OutcomeVector({}), Error);
  EXPECT_THROW(OutcomeVector({1.0, NAN}), Error);
  EXPECT_THROW(OutcomeVector({INFINITY}), Error);
  EXPECT_NO_THROW(OutcomeVector({0.0}));
}

TEST(PotentialOutcomeTable, LengthsMustMatch) {
  EXPECT_THROW(PotentialOutcomeTable(OutcomeVector({1, 2}), OutcomeVector({1})), Error);
}

TEST(ExperimentDesign, Validation) {
  EXPECT_NO_THROW(ExperimentDesign::census(4, 2));
  EXPECT_THROW(ExperimentDesign::census(4, 1), Error);
  EXPECT_THROW(ExperimentDesign::census(4, 3), Error);
  EXPECT_THROW(ExperimentDesign(PopulationSize::finite(4), 5, 2), Error);
  const ExperimentDesign inf(PopulationSize::infinite(), 5, 2);
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_FALSE(inf.is_census());
  EXPECT_THROW(inf.population().count(), Error);
  try {
    ExperimentDesign::census(3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDesign);
  }
}

TEST(PopulationMoments, Examples) {
  EXPECT_DOUBLE_EQ(population_mean(std::vector<double>{1, 2, 3}), 2.0);
  EXPECT_DOUBLE_EQ(population_mean(std::vector<double>{7.25, 7.25, 7.25, 7.25}), 7.25);
  EXPECT_DOUBLE_EQ(population_mean(std::vector<double>{1, 2, 3, 4}), 2.5);
  EXPECT_DOUBLE_EQ(population_variance(std::vector<double>{1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(population_variance(std::vector<double>{0, 2}), 1.0);
  EXPECT_DOUBLE_EQ(population_variance(std::vector<double>{1, 2, 3, 4}), 1.25);
  EXPECT_DOUBLE_EQ(population_covariance(std::vector<double>{0, 1}, std::vector<double>{1, 0}), -0.25);
  EXPECT_DOUBLE_EQ(population_covariance(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}), 1.25);
}

TEST(PopulationMoments, ErrorsOnEmptyOrMismatch) {
  const std::vector<double> empty;
  EXPECT_THROW(population_mean(empty), Error);
  EXPECT_THROW(population_variance(empty), Error);
  try {
    population_covariance(std::vector<double>{1, 2}, std::vector<double>{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(PopulationMoments, AgreeWithTwoPassOracle) {
  auto rng = test_rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + trial % 40;
    const auto v = testing::random_reals(rng, len);
    const auto w = testing::random_reals(rng, len);
    EXPECT_LE(relative_error(population_variance(v), naive_covariance(v, v)), 1e-12);
    EXPECT_LE(relative_error(population_covariance(v, w), naive_covariance(v, w)), 1e-12);
    EXPECT_EQ(population_covariance(v, w), population_covariance(w, v));
    EXPECT_LE(relative_error(population_variance(v), population_covariance(v, v)), 1e-12);
  }
}

TEST(PopulationMoments, TranslationAndScale) {
  auto rng = test_rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = testing::random_reals(rng, 2 + trial % 30);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    const double a = coef(rng), b = coef(rng);
    std::vector<double> t(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = a * v[i] + b;
    const double base = population_variance(v);
    EXPECT_LE(std::abs(population_variance(t) - a * a * base), 1e-12 * std::max(1.0, a * a * base));
  }
}

TEST(TrueVariance, Examples) {
  const PotentialOutcomeTable same(OutcomeVector({1, 2, 3, 4}), OutcomeVector({1, 2, 3, 4}));
  EXPECT_NEAR(true_variance(same, ExperimentDesign::census(4, 2)), 5.0 / 3.0, 1e-14);

  const PotentialOutcomeTable flat(OutcomeVector({3, 3, 3, 3}), OutcomeVector({1, 1, 1, 1}));
  EXPECT_EQ(true_variance(flat, ExperimentDesign::census(4, 2)), 0.0);

  const PotentialOutcomeTable binary(OutcomeVector({0, 0, 1, 1}), OutcomeVector({0, 0, 1, 1}));
  EXPECT_NEAR(true_variance(binary, ExperimentDesign::census(4, 2)),
              enumerated_variance({0, 0, 1, 1}, {0, 0, 1, 1}, 4, 2), 1e-14);
}

TEST(TrueVariance, DesignMustMatchTable) {
  const PotentialOutcomeTable t(OutcomeVector({1, 2, 3, 4}), OutcomeVector({1, 2, 3, 4}));
  EXPECT_THROW(true_variance(t, ExperimentDesign::census(5, 2)), Error);
  EXPECT_THROW(true_variance(t, ExperimentDesign(PopulationSize::infinite(), 4, 2)), Error);
}

TEST(TrueVariance, MatchesIndependentEnumerationForSmallPopulations) {
  auto rng = test_rng(3);
  for (std::size_t big_n = 4; big_n <= 6; ++big_n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto y1 = testing::random_reals(rng, big_n);
      const auto y0 = testing::random_reals(rng, big_n);
      const PotentialOutcomeTable table{OutcomeVector(y1), OutcomeVector(y0)};
      for (std::size_t n = 4; n <= big_n; ++n) {
        for (std::size_t m = 2; m + 2 <= n; ++m) {
          const double got = true_variance(table, ExperimentDesign(PopulationSize::finite(big_n), n, m));
          EXPECT_LE(relative_error(got, enumerated_variance(y1, y0, n, m)), 1e-10);
          EXPECT_GE(got, 0.0);
        }
      }
    }
  }
}

TEST(TrueAverageEffect, Examples) {
  EXPECT_EQ(true_average_effect({OutcomeVector({1, 5, 2}), OutcomeVector({1, 5, 2})}), 0.0);
  EXPECT_NEAR(true_average_effect({OutcomeVector({3, 7, 4}), OutcomeVector({1, 5, 2})}), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(true_average_effect({OutcomeVector({1, 2}), OutcomeVector({0, 0})}), 1.5);
}

}  // namespace
}  // namespace sharpvar
