// sharpvar command-line front end. Talks to the library only through the C API.

#include <sharpvar/sharpvar.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDesign = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(sv_status status) {
  switch (status) {
    case SV_OK: return 0;
    case SV_ERR_INVALID_DESIGN:
    case SV_ERR_TOO_LARGE: return kExitDesign;
    case SV_ERR_NUMERICAL_FAILURE:
    case SV_ERR_INTERNAL: return kExitNumerical;
    default: return kExitInput;
  }
}

struct Failure {
  int exit_code;
};

void check(sv_status status) {
  if (status == SV_OK) return;
  std::cerr << "sharpvar: " << sv_status_name(status) << ": " << sv_last_error() << "\n";
  throw Failure{exit_code_for(status)};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "sharpvar: invalid input: " << message << "\n";
  throw Failure{kExitInput};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Experiment = std::unique_ptr<sv_experiment, Deleter<sv_experiment, sv_experiment_destroy>>;
using Table = std::unique_ptr<sv_table, Deleter<sv_table, sv_table_destroy>>;
using Hypothesis = std::unique_ptr<sv_hypothesis, Deleter<sv_hypothesis, sv_hypothesis_destroy>>;
using Report = std::unique_ptr<sv_report, Deleter<sv_report, sv_report_destroy>>;

struct Output {
  std::string format = "json";
  bool timestamp = false;
};

void add_output_options(CLI::App& cmd, Output& out) {
  cmd.add_option("--format", out.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  cmd.add_flag("--timestamp", out.timestamp, "embed the UTC generation time");
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(sv_report* report, const Output& out) {
  if (out.timestamp) check(sv_report_set_timestamp(report, utc_now().c_str()));
  const char* text = nullptr;
  check(sv_report_render(report, out.format == "tsv" ? SV_FORMAT_TSV : SV_FORMAT_JSON, &text));
  std::fwrite(text, 1, std::char_traits<char>::length(text), stdout);
  std::fflush(stdout);
}

uint64_t parse_population(const std::string& text) {
  if (text.empty()) return SV_POPULATION_SAMPLE;
  if (text == "infinite" || text == "inf") return SV_POPULATION_INFINITE;
  uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0 || value == SV_POPULATION_INFINITE) {
    usage_error("--population-size must be a positive count or 'infinite'");
  }
  return value;
}

Hypothesis make_hypothesis(const std::vector<std::string>& tokens) {
  sv_hypothesis* h = nullptr;
  const std::string kind = tokens.empty() ? "sharp-null" : tokens[0];
  if (kind == "sharp-null") {
    if (tokens.size() > 1) usage_error("sharp-null takes no argument");
    check(sv_hypothesis_sharp_null(&h));
  } else if (kind.rfind("constant:", 0) == 0) {
    const std::string value = kind.substr(9);
    double tau = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), tau);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
      usage_error("constant effect must be a number, e.g. constant:1.5");
    }
    check(sv_hypothesis_constant(tau, &h));
  } else if (kind == "edits" || kind.rfind("edits:", 0) == 0) {
    std::string path = kind == "edits" ? (tokens.size() > 1 ? tokens[1] : "") : kind.substr(6);
    if (path.empty()) usage_error("edits hypothesis needs a CSV path");
    check(sv_hypothesis_edits_load_csv(path.c_str(), &h));
  } else {
    usage_error("unknown hypothesis '" + kind + "' (expected sharp-null, constant:TAU or edits PATH)");
  }
  return Hypothesis(h);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance bounds for difference-in-means estimates in randomized experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sv_version()));

  // estimate
  Output est_out;
  std::string est_input, est_population;
  double est_level = 0.95;
  auto* estimate = app.add_subcommand("estimate", "Variance estimates and Wald intervals for an observed experiment");
  estimate->add_option("--input", est_input, "CSV with header arm,outcome")->required();
  estimate->add_option("--population-size", est_population, "population size N (count or 'infinite'; default n)");
  estimate->add_option("--level", est_level, "confidence level")->check(CLI::Range(0.0, 1.0));
  add_output_options(*estimate, est_out);

  // simulate
  Output sim_out;
  std::string sim_input, sim_table, sim_population, sim_replicates = "10000";
  std::vector<std::string> sim_hypothesis;
  std::size_t sim_treated = 0, sim_sample = 0;
  uint64_t sim_seed = 1;
  double sim_level = 0.95;
  auto* simulate = app.add_subcommand("simulate", "Repeated-randomization study of the variance estimators");
  auto* input_opt = simulate->add_option("--input", sim_input, "observed CSV (arm,outcome); outcomes imputed");
  auto* table_opt = simulate->add_option("--table", sim_table, "full potential-outcome CSV (y1,y0)");
  input_opt->excludes(table_opt);
  simulate->add_option("--hypothesis", sim_hypothesis, "sharp-null | constant:TAU | edits PATH")
      ->expected(1, 2)
      ->needs(input_opt);
  simulate->add_option("--population-size", sim_population, "population size N of the --input sample (default n)")
      ->needs(input_opt);
  simulate->add_option("--treated", sim_treated, "treated count m (with --table)")->needs(table_opt);
  simulate->add_option("--sample-size", sim_sample, "sample size n (with --table; default N)")->needs(table_opt);
  simulate->add_option("--replicates", sim_replicates, "replicate count, or 'exhaustive'");
  simulate->add_option("--seed", sim_seed, "random seed");
  simulate->add_option("--level", sim_level, "confidence level")->check(CLI::Range(0.0, 1.0));
  add_output_options(*simulate, sim_out);

  // illustrate
  Output ill_out;
  std::optional<double> alpha0, beta0, alpha1, beta1;
  bool table3 = false;
  std::size_t grid_size = 100000;
  auto* illustrate = app.add_subcommand("illustrate", "Limiting upper-bound ratios under Beta marginals");
  auto* a0 = illustrate->add_option("--alpha0", alpha0, "control Beta alpha");
  auto* b0 = illustrate->add_option("--beta0", beta0, "control Beta beta");
  auto* a1 = illustrate->add_option("--alpha1", alpha1, "treatment Beta alpha");
  auto* b1 = illustrate->add_option("--beta1", beta1, "treatment Beta beta");
  auto* t3 = illustrate->add_flag("--table3", table3, "the 18-scenario sweep");
  for (auto* opt : {a0, b0, a1, b1}) t3->excludes(opt);
  illustrate->add_option("--grid-size", grid_size, "quadrature points K")->check(CLI::PositiveNumber);
  add_output_options(*illustrate, ill_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (estimate->parsed()) {
      sv_experiment* raw = nullptr;
      check(sv_experiment_load_csv(est_input.c_str(), parse_population(est_population), &raw));
      Experiment experiment(raw);
      sv_report* report = nullptr;
      check(sv_report_estimate(experiment.get(), est_level, &report));
      emit(Report(report).get(), est_out);
      return 0;
    }

    if (simulate->parsed()) {
      sv_simulation_options options;
      sv_simulation_options_init(&options);
      options.seed = sim_seed;
      options.level = sim_level;
      if (sim_replicates == "exhaustive") {
        options.exhaustive = 1;
      } else {
        const auto [ptr, ec] = std::from_chars(sim_replicates.data(), sim_replicates.data() + sim_replicates.size(),
                                               options.replicates);
        if (sim_replicates.empty() || ec != std::errc() || ptr != sim_replicates.data() + sim_replicates.size()) {
          usage_error("--replicates must be a count or 'exhaustive'");
        }
      }

      Table table;
      std::size_t treated = sim_treated;
      std::size_t sample = sim_sample;
      if (!sim_input.empty()) {
        sv_experiment* raw = nullptr;
        check(sv_experiment_load_csv(sim_input.c_str(), parse_population(sim_population), &raw));
        Experiment experiment(raw);
        check(sv_experiment_design(experiment.get(), nullptr, &sample, &treated));
        Hypothesis hypothesis = make_hypothesis(sim_hypothesis);
        sv_table* t = nullptr;
        check(sv_table_impute(experiment.get(), hypothesis.get(), &t));
        table.reset(t);
      } else if (!sim_table.empty()) {
        if (treated == 0) usage_error("--table needs --treated");
        sv_table* t = nullptr;
        check(sv_table_load_csv(sim_table.c_str(), &t));
        table.reset(t);
      } else {
        usage_error("simulate needs --input or --table");
      }

      sv_report* report = nullptr;
      check(sv_report_simulate(table.get(), sample, treated, &options, &report));
      emit(Report(report).get(), sim_out);
      return 0;
    }

    if (illustrate->parsed()) {
      sv_report* report = nullptr;
      if (table3) {
        check(sv_report_table3(grid_size, &report));
      } else {
        if (!alpha0 || !beta0 || !alpha1 || !beta1) {
          usage_error("illustrate needs --alpha0 --beta0 --alpha1 --beta1, or --table3");
        }
        check(sv_report_illustrate(*alpha0, *beta0, *alpha1, *beta1, grid_size, &report));
      }
      emit(Report(report).get(), ill_out);
      return 0;
    }
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return 0;
}
