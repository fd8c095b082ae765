#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "estimators.hpp"
#include "illustrations.hpp"
#include "simulation.hpp"

namespace sharpvar {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

enum class Format { Json, Tsv };

/// Payload of an estimate run: the variance estimates, Wald intervals on the
/// three upper estimates and diagnostics.
struct ReportDocument {
  std::string schema_version = kSchemaVersion;
  double level = kDefaultLevel;
  VarianceEstimateSet estimates;
  ConfidenceInterval interval_a;
  ConfidenceInterval interval_b_plus;
  ConfidenceInterval interval_high;
  std::optional<std::string> timestamp;
};

ReportDocument make_estimate_report(const ObservedExperiment& obs, double level = kDefaultLevel);

Json to_json(const ReportDocument& doc);
/// Inverse of to_json; Parse on missing fields or a foreign schema version.
ReportDocument report_from_json(const Json& json);

Json to_json(const SimulationReport& report);
Json to_json(const std::vector<IllustrationRow>& rows, std::size_t grid_size);

/// JSON: two-space indented. TSV: one `metric<TAB>value` line per leaf,
/// metric names are dotted object paths, arrays of objects use 1-based
/// positions, arrays of scalars are comma-joined, null prints as NA. Both end
/// with a newline and print numbers as shortest round-trip decimals.
std::string render(const Json& json, Format format);

/// Dotted-path numeric lookup (same names as the TSV metrics).
std::optional<double> lookup_number(const Json& json, const std::string& metric);

/// Shortest decimal string that parses back to `value`.
std::string format_number(double value);

}  // namespace sharpvar
