#include "dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <string_view>

#include "error.hpp"

namespace sharpvar {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
  fail(ErrorCode::Parse, "line " + std::to_string(line) + ": " + message);
}

double parse_number(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    parse_error(line, "'" + std::string(field) + "' is not a finite decimal number");
  }
  return value;
}

// Reads header + rows; `row` receives the fields of each data line.
void read_csv(std::istream& in, const std::vector<std::string_view>& header,
              const std::function<void(const std::vector<std::string_view>&, std::size_t)>& row) {
  std::string text;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view = text;
    if (line == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split_fields(view);
    if (fields.size() != header.size()) {
      parse_error(line, "expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()));
    }
    if (!seen_header) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (fields[i] != header[i]) {
          std::string expected;
          for (std::size_t j = 0; j < header.size(); ++j) expected += (j ? "," : "") + std::string(header[j]);
          parse_error(line, "header must be '" + expected + "'");
        }
      }
      seen_header = true;
      continue;
    }
    row(fields, line);
  }
  if (in.bad()) fail(ErrorCode::Io, "read failure");
  if (!seen_header) parse_error(line == 0 ? 1 : line, "missing header row");
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return in;
}

}  // namespace

Dataset parse_dataset(std::istream& in) {
  Dataset data;
  read_csv(in, {"arm", "outcome"}, [&](const auto& fields, std::size_t line) {
    const std::string_view arm = fields[0];
    const double value = parse_number(fields[1], line);
    if (arm == "treat" || arm == "1") {
      data.treated.push_back(value);
    } else if (arm == "control" || arm == "0") {
      data.control.push_back(value);
    } else {
      parse_error(line, "arm must be treat, control, 1 or 0 (got '" + std::string(arm) + "')");
    }
  });
  return data;
}

Dataset load_dataset(const std::string& path) {
  auto in = open(path);
  return parse_dataset(in);
}

ObservedExperiment to_experiment(const Dataset& data, std::optional<PopulationSize> population) {
  if (data.treated.size() < 2 || data.control.size() < 2) {
    fail(ErrorCode::InvalidDesign, "dataset needs at least 2 rows per arm (treat: " +
                                       std::to_string(data.treated.size()) +
                                       ", control: " + std::to_string(data.control.size()) + ")");
  }
  return {OutcomeVector(data.treated), OutcomeVector(data.control), population};
}

PotentialOutcomeTable parse_table(std::istream& in) {
  std::vector<double> y1, y0;
  read_csv(in, {"y1", "y0"}, [&](const auto& fields, std::size_t line) {
    y1.push_back(parse_number(fields[0], line));
    y0.push_back(parse_number(fields[1], line));
  });
  if (y1.empty()) fail(ErrorCode::Parse, "table has no rows");
  return {OutcomeVector(std::move(y1)), OutcomeVector(std::move(y0))};
}

PotentialOutcomeTable load_table(const std::string& path) {
  auto in = open(path);
  return parse_table(in);
}

std::vector<TableEdit> parse_edits(std::istream& in) {
  std::vector<TableEdit> edits;
  read_csv(in, {"index", "outcome", "value"}, [&](const auto& fields, std::size_t line) {
    TableEdit e;
    const std::string_view idx = fields[0];
    const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), e.index);
    if (idx.empty() || ec != std::errc() || ptr != idx.data() + idx.size()) {
      parse_error(line, "'" + std::string(idx) + "' is not a row index");
    }
    if (fields[1] == "y1") {
      e.outcome = PotentialOutcome::Treated;
    } else if (fields[1] == "y0") {
      e.outcome = PotentialOutcome::Control;
    } else {
      parse_error(line, "outcome must be y1 or y0");
    }
    e.value = parse_number(fields[2], line);
    edits.push_back(e);
  });
  return edits;
}

std::vector<TableEdit> load_edits(const std::string& path) {
  auto in = open(path);
  return parse_edits(in);
}

}  // namespace sharpvar
