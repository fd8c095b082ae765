#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "estimators.hpp"
#include "finite_population.hpp"
#include "simulation.hpp"

namespace sharpvar {

// CSV dialect shared by every input: comma-separated, one mandatory header
// row, UTF-8, '.' as the decimal point. Blank lines are ignored. Parse errors
// carry the 1-based line number.

/// Header `arm,outcome`; arm is treat/control (or 1/0).
struct Dataset {
  std::vector<double> treated;
  std::vector<double> control;
};

Dataset parse_dataset(std::istream& in);
Dataset load_dataset(const std::string& path);

/// Builds the observed experiment; N defaults to the row count.
ObservedExperiment to_experiment(const Dataset& data, std::optional<PopulationSize> population = std::nullopt);

/// Header `y1,y0`.
PotentialOutcomeTable parse_table(std::istream& in);
PotentialOutcomeTable load_table(const std::string& path);

/// Header `index,outcome,value`; outcome is y1 or y0, index is a 0-based
/// row of the imputed table.
std::vector<TableEdit> parse_edits(std::istream& in);
std::vector<TableEdit> load_edits(const std::string& path);

}  // namespace sharpvar
