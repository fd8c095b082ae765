#include "report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace sharpvar {

namespace {

constexpr std::pair<std::uint32_t, const char*> kClampNames[] = {
    {kClampVa, "v_a"},       {kClampVbPlus, "v_b_plus"}, {kClampVbMinus, "v_b_minus"},
    {kClampVHigh, "v_high"}, {kClampVLow, "v_low"},
};

Json interval_json(const ConfidenceInterval& ci) {
  return Json{{"center", ci.center}, {"half_width", ci.half_width}, {"lower", ci.lower()}, {"upper", ci.upper()}};
}

Json population_json(PopulationSize population) {
  if (population.is_infinite()) return "infinite";
  return population.count();
}

Json summary_json(const EstimatorSummary& s, bool defined) {
  Json out{{"mean_estimate", s.mean_estimate}, {"mean_width", s.mean_width}, {"covered", s.covered}};
  out["coverage"] = defined ? Json(s.coverage) : Json(nullptr);
  return out;
}

template <class T>
T field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(ErrorCode::Parse, std::string("report is missing '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("report field '") + key + "': " + e.what());
  }
}

const Json& object(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_object()) {
    fail(ErrorCode::Parse, std::string("report is missing object '") + key + "'");
  }
  return obj.at(key);
}

ConfidenceInterval interval_from(const Json& obj, double level, VarianceBasis basis) {
  return {field<double>(obj, "center"), field<double>(obj, "half_width"), level, basis};
}

void write_json(std::ostream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << inner << Json(it.key()).dump() << ": ";
        write_json(out, it.value(), indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << inner;
        write_json(out, j[i], indent + 1);
      }
      out << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      out << format_number(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

std::string scalar_text(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return "NA";
    case Json::value_t::string: return j.get<std::string>();
    case Json::value_t::number_float: return format_number(j.get<double>());
    default: return j.dump();
  }
}

void write_tsv(std::ostream& out, const Json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      write_tsv(out, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    }
    return;
  }
  if (j.is_array()) {
    const bool nested = !j.empty() && (j[0].is_object() || j[0].is_array());
    if (nested) {
      for (std::size_t i = 0; i < j.size(); ++i) write_tsv(out, j[i], prefix + "." + std::to_string(i + 1));
      return;
    }
    out << prefix << '\t';
    for (std::size_t i = 0; i < j.size(); ++i) out << (i ? "," : "") << scalar_text(j[i]);
    out << '\n';
    return;
  }
  out << prefix << '\t' << scalar_text(j) << '\n';
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::NumericalFailure, "cannot serialise a non-finite number");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

ReportDocument make_estimate_report(const ObservedExperiment& obs, double level) {
  ReportDocument doc;
  doc.level = level;
  doc.estimates = estimate_all(obs);
  const auto& e = doc.estimates;
  doc.interval_a = wald_interval(e.tau_hat, e.v_a, level, VarianceBasis::Conventional);
  doc.interval_b_plus = wald_interval(e.tau_hat, e.v_b_plus, level, VarianceBasis::NeymanUpper);
  doc.interval_high = wald_interval(e.tau_hat, e.v_high, level, VarianceBasis::SharpUpper);
  return doc;
}

Json to_json(const ReportDocument& doc) {
  const auto& e = doc.estimates;
  Json clamped = Json::array();
  for (const auto& [flag, name] : kClampNames) {
    if (e.clamped & flag) clamped.push_back(name);
  }
  Json out;
  out["schema_version"] = doc.schema_version;
  out["kind"] = "estimate";
  out["inputs"] = Json{{"population_size", population_json(e.design.population())},
                       {"sample_size", e.design.sample_size()},
                       {"treated", e.design.treated()},
                       {"control", e.design.control()},
                       {"level", doc.level}};
  out["estimates"] = Json{{"tau_hat", e.tau_hat},       {"s2_y1_hat", e.s2_y1_hat},
                          {"s2_y0_hat", e.s2_y0_hat},   {"cov_high_hat", e.cov_high_hat},
                          {"cov_low_hat", e.cov_low_hat}, {"v_a", e.v_a},
                          {"v_b_plus", e.v_b_plus},     {"v_b_minus", e.v_b_minus},
                          {"v_high", e.v_high},         {"v_low", e.v_low}};
  out["intervals"] = Json{{"v_a", interval_json(doc.interval_a)},
                          {"v_b_plus", interval_json(doc.interval_b_plus)},
                          {"v_high", interval_json(doc.interval_high)}};
  out["diagnostics"] = Json{{"clamped", clamped},
                            {"neyman_heuristic", e.neyman_heuristic},
                            {"infinite_population", e.infinite_population}};
  if (doc.timestamp) out["timestamp"] = *doc.timestamp;
  return out;
}

ReportDocument report_from_json(const Json& json) {
  ReportDocument doc;
  doc.schema_version = field<std::string>(json, "schema_version");
  if (doc.schema_version != kSchemaVersion) {
    fail(ErrorCode::Parse, "unsupported schema version '" + doc.schema_version + "'");
  }
  if (field<std::string>(json, "kind") != "estimate") fail(ErrorCode::Parse, "not an estimate report");

  const Json& inputs = object(json, "inputs");
  doc.level = field<double>(inputs, "level");
  const Json& pop = inputs.contains("population_size") ? inputs.at("population_size") : Json();
  PopulationSize population = PopulationSize::infinite();
  if (pop.is_number_unsigned()) {
    population = PopulationSize::finite(pop.get<std::uint64_t>());
  } else if (!(pop.is_string() && pop.get<std::string>() == "infinite")) {
    fail(ErrorCode::Parse, "population_size must be a count or \"infinite\"");
  }

  auto& e = doc.estimates;
  try {
    e.design = ExperimentDesign(population, field<std::size_t>(inputs, "sample_size"),
                                field<std::size_t>(inputs, "treated"));
  } catch (const Error& err) {
    fail(ErrorCode::Parse, std::string("report design: ") + err.what());
  }
  const Json& est = object(json, "estimates");
  e.tau_hat = field<double>(est, "tau_hat");
  e.s2_y1_hat = field<double>(est, "s2_y1_hat");
  e.s2_y0_hat = field<double>(est, "s2_y0_hat");
  e.cov_high_hat = field<double>(est, "cov_high_hat");
  e.cov_low_hat = field<double>(est, "cov_low_hat");
  e.v_a = field<double>(est, "v_a");
  e.v_b_plus = field<double>(est, "v_b_plus");
  e.v_b_minus = field<double>(est, "v_b_minus");
  e.v_high = field<double>(est, "v_high");
  e.v_low = field<double>(est, "v_low");

  const Json& intervals = object(json, "intervals");
  doc.interval_a = interval_from(object(intervals, "v_a"), doc.level, VarianceBasis::Conventional);
  doc.interval_b_plus = interval_from(object(intervals, "v_b_plus"), doc.level, VarianceBasis::NeymanUpper);
  doc.interval_high = interval_from(object(intervals, "v_high"), doc.level, VarianceBasis::SharpUpper);

  const Json& diag = object(json, "diagnostics");
  for (const auto& name : field<std::vector<std::string>>(diag, "clamped")) {
    bool known = false;
    for (const auto& [flag, label] : kClampNames) {
      if (name == label) {
        e.clamped |= flag;
        known = true;
      }
    }
    if (!known) fail(ErrorCode::Parse, "unknown clamp flag '" + name + "'");
  }
  e.neyman_heuristic = field<bool>(diag, "neyman_heuristic");
  e.infinite_population = field<bool>(diag, "infinite_population");
  if (json.contains("timestamp")) doc.timestamp = field<std::string>(json, "timestamp");
  return doc;
}

Json to_json(const SimulationReport& r) {
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "simulation";
  out["inputs"] = Json{{"population_size", population_json(r.design.population())},
                       {"sample_size", r.design.sample_size()},
                       {"treated", r.design.treated()},
                       {"control", r.design.control()},
                       {"level", r.level},
                       {"mode", r.exact ? "exhaustive" : "monte_carlo"},
                       {"replicates", r.replicates}};
  if (!r.exact) out["inputs"]["seed"] = r.seed;
  out["exact"] = r.exact;
  out["truth"] = Json{{"tau", r.true_effect},
                      {"variance", r.true_variance},
                      {"sharp_upper_limit", r.sharp_upper_limit},
                      {"sharp_lower_limit", r.sharp_lower_limit}};
  const bool defined = r.coverage_defined;
  out["summary"] = Json{{"mean_tau_hat", defined ? Json(r.mean_tau_hat) : Json(nullptr)},
                        {"tau_hat_variance", defined ? Json(r.tau_hat_variance) : Json(nullptr)},
                        {"gamma_hat", defined && r.gamma_hat > 0.0 ? Json(r.gamma_hat) : Json(nullptr)},
                        {"coverage_defined", defined},
                        {"width_order_violations", r.width_order_violations}};
  out["estimators"] = Json{{"v_a", summary_json(r.conventional, defined)},
                           {"v_b_plus", summary_json(r.neyman_upper, defined)},
                           {"v_high", summary_json(r.sharp_upper, defined)}};
  out["means"] = Json{{"v_b_minus", r.mean_v_b_minus}, {"v_low", r.mean_v_low}};
  return out;
}

Json to_json(const std::vector<IllustrationRow>& rows, std::size_t grid_size) {
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "illustration";
  out["inputs"] = Json{{"grid_size", grid_size}};
  Json list = Json::array();
  for (const auto& row : rows) {
    list.push_back(Json{{"index", row.index},
                        {"alpha0", row.control.alpha},
                        {"beta0", row.control.beta},
                        {"alpha1", row.treat.alpha},
                        {"beta1", row.treat.beta},
                        {"ratio_vs_conventional", row.result.ratio_vs_conventional},
                        {"ratio_vs_neyman_upper", row.result.ratio_vs_neyman_upper}});
  }
  out["rows"] = std::move(list);
  return out;
}

std::string render(const Json& json, Format format) {
  std::ostringstream out;
  if (format == Format::Json) {
    write_json(out, json, 0);
    out << '\n';
  } else {
    write_tsv(out, json, "");
  }
  return out.str();
}

std::optional<double> lookup_number(const Json& json, const std::string& metric) {
  const Json* node = &json;
  std::size_t start = 0;
  while (start <= metric.size()) {
    const auto dot = metric.find('.', start);
    const std::string part = metric.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (node->is_object()) {
      if (!node->contains(part)) return std::nullopt;
      node = &node->at(part);
    } else if (node->is_array()) {
      std::size_t pos = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), pos);
      if (ec != std::errc() || ptr != part.data() + part.size() || pos == 0 || pos > node->size()) {
        return std::nullopt;
      }
      node = &(*node)[pos - 1];
    } else {
      return std::nullopt;
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_number()) return node->get<double>();
  if (node->is_boolean()) return node->get<bool>() ? 1.0 : 0.0;
  return std::nullopt;
}

}  // namespace sharpvar
