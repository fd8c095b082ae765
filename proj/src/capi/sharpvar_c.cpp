#include "sharpvar/sharpvar.h"

#include <cmath>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "../core/dataset.hpp"
#include "../core/error.hpp"
#include "../core/estimators.hpp"
#include "../core/illustrations.hpp"
#include "../core/normal.hpp"
#include "../core/report.hpp"
#include "../core/simulation.hpp"

struct sv_experiment {
  sharpvar::ObservedExperiment value;
};

struct sv_table {
  sharpvar::PotentialOutcomeTable value;
};

struct sv_hypothesis {
  sharpvar::EffectHypothesis value;
};

struct sv_report {
  sharpvar::Json json;
  std::string rendered;
};

namespace {

thread_local std::string g_last_error;

sv_status code_for(sharpvar::ErrorCode code) {
  using sharpvar::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidInput: return SV_ERR_INVALID_INPUT;
    case ErrorCode::InvalidDesign: return SV_ERR_INVALID_DESIGN;
    case ErrorCode::TooLarge: return SV_ERR_TOO_LARGE;
    case ErrorCode::NumericalFailure: return SV_ERR_NUMERICAL_FAILURE;
    case ErrorCode::Parse: return SV_ERR_PARSE;
    case ErrorCode::Io: return SV_ERR_IO;
  }
  return SV_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
sv_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return SV_OK;
  } catch (const sharpvar::Error& e) {
    g_last_error = e.what();
    return code_for(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SV_ERR_INTERNAL;
  }
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr) sharpvar::fail(sharpvar::ErrorCode::InvalidInput, std::string(what) + " is NULL");
}

std::optional<sharpvar::PopulationSize> population_from(uint64_t population) {
  if (population == SV_POPULATION_SAMPLE) return std::nullopt;
  if (population == SV_POPULATION_INFINITE) return sharpvar::PopulationSize::infinite();
  return sharpvar::PopulationSize::finite(population);
}

std::vector<double> copy_values(const double* data, size_t count, const char* what) {
  if (count > 0) require(data, what);
  return {data, data + count};
}

sv_report* new_report(sharpvar::Json json) { return new sv_report{std::move(json), {}}; }

}  // namespace

extern "C" {

const char* sv_version(void) { return "1.0.0"; }

const char* sv_status_name(sv_status status) {
  switch (status) {
    case SV_OK: return "ok";
    case SV_ERR_INVALID_INPUT: return "invalid input";
    case SV_ERR_INVALID_DESIGN: return "invalid design";
    case SV_ERR_TOO_LARGE: return "too large";
    case SV_ERR_NUMERICAL_FAILURE: return "numerical failure";
    case SV_ERR_PARSE: return "parse error";
    case SV_ERR_IO: return "i/o error";
    case SV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sv_last_error(void) { return g_last_error.c_str(); }

sv_status sv_experiment_create(const double* treated, size_t treated_count, const double* control,
                               size_t control_count, uint64_t population, sv_experiment** out) {
  return guarded([&] {
    require(out, "out");
    auto yt = copy_values(treated, treated_count, "treated");
    auto yc = copy_values(control, control_count, "control");
    if (yt.size() < 2 || yc.size() < 2) {
      sharpvar::fail(sharpvar::ErrorCode::InvalidDesign, "each arm needs at least 2 units");
    }
    *out = new sv_experiment{sharpvar::ObservedExperiment(sharpvar::OutcomeVector(std::move(yt)),
                                                          sharpvar::OutcomeVector(std::move(yc)),
                                                          population_from(population))};
  });
}

sv_status sv_experiment_load_csv(const char* path, uint64_t population, sv_experiment** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto data = sharpvar::load_dataset(path);
    *out = new sv_experiment{sharpvar::to_experiment(data, population_from(population))};
  });
}

sv_status sv_experiment_design(const sv_experiment* experiment, uint64_t* population, size_t* sample_size,
                               size_t* treated) {
  return guarded([&] {
    require(experiment, "experiment");
    const auto& d = experiment->value.design();
    if (population) *population = d.is_infinite() ? SV_POPULATION_INFINITE : d.population().count();
    if (sample_size) *sample_size = d.sample_size();
    if (treated) *treated = d.treated();
  });
}

void sv_experiment_destroy(sv_experiment* experiment) { delete experiment; }

sv_status sv_estimate(const sv_experiment* experiment, sv_estimates* out) {
  return guarded([&] {
    require(experiment, "experiment");
    require(out, "out");
    const auto e = sharpvar::estimate_all(experiment->value);
    *out = sv_estimates{e.tau_hat,   e.s2_y1_hat, e.s2_y0_hat, e.cov_high_hat,          e.cov_low_hat,
                        e.v_a,       e.v_b_plus,  e.v_b_minus, e.v_high,                e.v_low,
                        e.clamped,   e.neyman_heuristic ? 1 : 0, e.infinite_population ? 1 : 0};
  });
}

sv_status sv_wald_interval(double tau_hat, double variance, double level, sv_interval* out) {
  return guarded([&] {
    require(out, "out");
    const auto ci = sharpvar::wald_interval(tau_hat, variance, level);
    *out = sv_interval{ci.center, ci.half_width, ci.lower(), ci.upper(), ci.level};
  });
}

sv_status sv_inverse_normal_cdf(double p, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = sharpvar::inverse_normal_cdf(p);
  });
}

sv_status sv_table_create(const double* y1, const double* y0, size_t rows, sv_table** out) {
  return guarded([&] {
    require(out, "out");
    *out = new sv_table{sharpvar::PotentialOutcomeTable(sharpvar::OutcomeVector(copy_values(y1, rows, "y1")),
                                                        sharpvar::OutcomeVector(copy_values(y0, rows, "y0")))};
  });
}

sv_status sv_table_load_csv(const char* path, sv_table** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sv_table{sharpvar::load_table(path)};
  });
}

sv_status sv_table_impute(const sv_experiment* experiment, const sv_hypothesis* hypothesis, sv_table** out) {
  return guarded([&] {
    require(experiment, "experiment");
    require(hypothesis, "hypothesis");
    require(out, "out");
    *out = new sv_table{sharpvar::impute(experiment->value, hypothesis->value)};
  });
}

size_t sv_table_rows(const sv_table* table) { return table ? table->value.size() : 0; }

sv_status sv_table_get(const sv_table* table, size_t row, double* y1, double* y0) {
  return guarded([&] {
    require(table, "table");
    if (row >= table->value.size()) sharpvar::fail(sharpvar::ErrorCode::InvalidInput, "row out of range");
    if (y1) *y1 = table->value.y1()[row];
    if (y0) *y0 = table->value.y0()[row];
  });
}

void sv_table_destroy(sv_table* table) { delete table; }

sv_status sv_hypothesis_sharp_null(sv_hypothesis** out) {
  return guarded([&] {
    require(out, "out");
    *out = new sv_hypothesis{sharpvar::EffectHypothesis::sharp_null()};
  });
}

sv_status sv_hypothesis_constant(double tau, sv_hypothesis** out) {
  return guarded([&] {
    require(out, "out");
    if (!std::isfinite(tau)) sharpvar::fail(sharpvar::ErrorCode::InvalidInput, "effect must be finite");
    *out = new sv_hypothesis{sharpvar::EffectHypothesis::constant_effect(tau)};
  });
}

sv_status sv_hypothesis_edits(const size_t* rows, const int* outcomes, const double* values, size_t count,
                              sv_hypothesis** out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) {
      require(rows, "rows");
      require(outcomes, "outcomes");
      require(values, "values");
    }
    std::vector<sharpvar::TableEdit> edits(count);
    for (size_t i = 0; i < count; ++i) {
      if (!std::isfinite(values[i])) sharpvar::fail(sharpvar::ErrorCode::InvalidInput, "edit value must be finite");
      edits[i] = {rows[i], outcomes[i] ? sharpvar::PotentialOutcome::Treated : sharpvar::PotentialOutcome::Control,
                  values[i]};
    }
    *out = new sv_hypothesis{sharpvar::EffectHypothesis::table_edits(std::move(edits))};
  });
}

sv_status sv_hypothesis_edits_load_csv(const char* path, sv_hypothesis** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sv_hypothesis{sharpvar::EffectHypothesis::table_edits(sharpvar::load_edits(path))};
  });
}

void sv_hypothesis_destroy(sv_hypothesis* hypothesis) { delete hypothesis; }

sv_status sv_report_estimate(const sv_experiment* experiment, double level, sv_report** out) {
  return guarded([&] {
    require(experiment, "experiment");
    require(out, "out");
    *out = new_report(sharpvar::to_json(sharpvar::make_estimate_report(experiment->value, level)));
  });
}

void sv_simulation_options_init(sv_simulation_options* options) {
  if (options == nullptr) return;
  *options = sv_simulation_options{10000, 1, sharpvar::kDefaultLevel, 0, 0};
}

sv_status sv_report_simulate(const sv_table* table, size_t sample_size, size_t treated,
                             const sv_simulation_options* options, sv_report** out) {
  return guarded([&] {
    require(table, "table");
    require(options, "options");
    require(out, "out");
    const auto& t = table->value;
    const size_t n = sample_size == 0 ? t.size() : sample_size;
    const sharpvar::ExperimentDesign design(sharpvar::PopulationSize::finite(t.size()), n, treated);
    sharpvar::SimulationReport report;
    if (options->exhaustive) {
      report = sharpvar::run_exhaustive(t, design, options->level);
    } else {
      report = sharpvar::run_monte_carlo(
          t, design, sharpvar::MonteCarloOptions{options->replicates, options->level, options->seed, options->threads});
    }
    *out = new_report(sharpvar::to_json(report));
  });
}

sv_status sv_report_illustrate(double alpha0, double beta0, double alpha1, double beta1, size_t grid_size,
                               sv_report** out) {
  return guarded([&] {
    require(out, "out");
    const sharpvar::BetaMarginal control{alpha0, beta0};
    const sharpvar::BetaMarginal treat{alpha1, beta1};
    control.validate();
    treat.validate();
    std::vector<sharpvar::IllustrationRow> rows{
        {1, control, treat, sharpvar::limiting_ratios(treat, control, grid_size)}};
    *out = new_report(sharpvar::to_json(rows, grid_size));
  });
}

sv_status sv_report_table3(size_t grid_size, sv_report** out) {
  return guarded([&] {
    require(out, "out");
    *out = new_report(sharpvar::to_json(sharpvar::table3_sweep(grid_size), grid_size));
  });
}

sv_status sv_report_set_timestamp(sv_report* report, const char* timestamp) {
  return guarded([&] {
    require(report, "report");
    require(timestamp, "timestamp");
    report->json["timestamp"] = timestamp;
  });
}

sv_status sv_report_render(sv_report* report, sv_format format, const char** text) {
  return guarded([&] {
    require(report, "report");
    require(text, "text");
    if (format != SV_FORMAT_JSON && format != SV_FORMAT_TSV) {
      sharpvar::fail(sharpvar::ErrorCode::InvalidInput, "unknown report format");
    }
    report->rendered = sharpvar::render(report->json, format == SV_FORMAT_JSON ? sharpvar::Format::Json
                                                                               : sharpvar::Format::Tsv);
    *text = report->rendered.c_str();
  });
}

sv_status sv_report_get_number(const sv_report* report, const char* metric, double* out) {
  return guarded([&] {
    require(report, "report");
    require(metric, "metric");
    require(out, "out");
    const auto value = sharpvar::lookup_number(report->json, metric);
    if (!value) sharpvar::fail(sharpvar::ErrorCode::InvalidInput, std::string("no numeric metric '") + metric + "'");
    *out = *value;
  });
}

void sv_report_destroy(sv_report* report) { delete report; }

}  // extern "C"
