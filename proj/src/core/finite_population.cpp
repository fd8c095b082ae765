#include "finite_population.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "numeric.hpp"

namespace sharpvar {

OutcomeVector::OutcomeVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorCode::InvalidInput, "outcome vector is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      fail(ErrorCode::InvalidInput, "outcome " + std::to_string(i) + " is not finite");
    }
  }
}

PotentialOutcomeTable::PotentialOutcomeTable(OutcomeVector y1, OutcomeVector y0)
    : y1_(std::move(y1)), y0_(std::move(y0)) {
  if (y1_.size() != y0_.size()) {
    fail(ErrorCode::InvalidInput, "potential outcome columns differ in length (" +
                                      std::to_string(y1_.size()) + " vs " +
                                      std::to_string(y0_.size()) + ")");
  }
}

std::uint64_t PopulationSize::count() const {
  if (!count_) fail(ErrorCode::InvalidDesign, "population size is infinite");
  return *count_;
}

ExperimentDesign::ExperimentDesign(PopulationSize population, std::size_t sample_size,
                                   std::size_t treated)
    : population_(population), sample_size_(sample_size), treated_(treated) {
  if (treated_ < 2) fail(ErrorCode::InvalidDesign, "treated arm needs at least 2 units");
  if (sample_size_ < treated_ || sample_size_ - treated_ < 2) {
    fail(ErrorCode::InvalidDesign, "control arm needs at least 2 units");
  }
  if (!population_.is_infinite() && population_.count() < sample_size_) {
    fail(ErrorCode::InvalidDesign,
         "population size " + std::to_string(population_.count()) +
             " is smaller than sample size " + std::to_string(sample_size_));
  }
}

bool ExperimentDesign::is_census() const noexcept {
  return !population_.is_infinite() && population_.count() == sample_size_;
}

double population_mean(std::span<const double> v) {
  if (v.empty()) fail(ErrorCode::InvalidInput, "mean of an empty vector");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v) {
  return population_covariance(v, v);
}

double population_covariance(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) fail(ErrorCode::InvalidInput, "covariance of vectors with unequal length");
  const double mv = population_mean(v);
  const double mw = population_mean(w);
  std::vector<double> dv(v.size()), dw(w.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    dv[i] = v[i] - mv;
    dw[i] = w[i] - mw;
  }
  return pairwise_dot(dv, dw) / static_cast<double>(v.size());
}

double true_variance(const PotentialOutcomeTable& table, const ExperimentDesign& design) {
  const auto population = static_cast<double>(design.population().count());
  if (design.population().count() != table.size()) {
    fail(ErrorCode::InvalidDesign, "design population size " +
                                       std::to_string(design.population().count()) +
                                       " does not match table length " +
                                       std::to_string(table.size()));
  }
  const auto m = static_cast<double>(design.treated());
  const auto c = static_cast<double>(design.control());
  const double s2_y1 = population_variance(table.y1());
  const double s2_y0 = population_variance(table.y0());
  const double s_10 = population_covariance(table.y1(), table.y0());
  const double v = ((population - m) / m * s2_y1 + (population - c) / c * s2_y0 + 2.0 * s_10) /
                   (population - 1.0);
  // Nonnegative in exact arithmetic; rounding on perfectly countermonotone
  // tables can land a few ulps below zero.
  return v < 0.0 ? 0.0 : v;
}

double true_average_effect(const PotentialOutcomeTable& table) {
  return population_mean(table.y1()) - population_mean(table.y0());
}

}  // namespace sharpvar
