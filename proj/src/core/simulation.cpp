#include "simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "coupling.hpp"
#include "error.hpp"
#include "normal.hpp"
#include "partition.hpp"

namespace sharpvar {

namespace {

constexpr double kOrderSlack = 1e-10;

struct Sums {
  std::uint64_t count = 0;
  double tau = 0.0;
  double tau_sq_err = 0.0;
  double v_a = 0.0, v_b_plus = 0.0, v_b_minus = 0.0, v_high = 0.0, v_low = 0.0;
  double w_a = 0.0, w_b_plus = 0.0, w_high = 0.0;
  std::uint64_t c_a = 0, c_b_plus = 0, c_high = 0;
  std::uint64_t violations = 0;

  void merge(const Sums& o) {
    count += o.count;
    tau += o.tau;
    tau_sq_err += o.tau_sq_err;
    v_a += o.v_a;
    v_b_plus += o.v_b_plus;
    v_b_minus += o.v_b_minus;
    v_high += o.v_high;
    v_low += o.v_low;
    w_a += o.w_a;
    w_b_plus += o.w_b_plus;
    w_high += o.w_high;
    c_a += o.c_a;
    c_b_plus += o.c_b_plus;
    c_high += o.c_high;
    violations += o.violations;
  }
};

// Per-replicate bookkeeping shared by the sampled and exhaustive paths.
class ReplicateScorer {
 public:
  ReplicateScorer(const PotentialOutcomeTable& table, const ExperimentDesign& design, double level)
      : table_(table),
        design_(design),
        partition_(build_partition(design.treated(), design.control())),
        tau_(true_average_effect(table)),
        z_(inverse_normal_cdf(0.5 + level / 2.0)),
        census_(design.is_census()) {}

  void score(const Assignment& a, Sums& s) const {
    const auto est = estimate_all(observe(table_, design_, a), partition_);
    const double err = est.tau_hat - tau_;
    s.count += 1;
    s.tau += est.tau_hat;
    s.tau_sq_err += err * err;
    s.v_a += est.v_a;
    s.v_b_plus += est.v_b_plus;
    s.v_b_minus += est.v_b_minus;
    s.v_high += est.v_high;
    s.v_low += est.v_low;
    const double h_a = z_ * std::sqrt(est.v_a);
    const double h_b = z_ * std::sqrt(est.v_b_plus);
    const double h_h = z_ * std::sqrt(est.v_high);
    s.w_a += 2.0 * h_a;
    s.w_b_plus += 2.0 * h_b;
    s.w_high += 2.0 * h_h;
    const double miss = std::fabs(err);
    s.c_a += miss <= h_a;
    s.c_b_plus += miss <= h_b;
    s.c_high += miss <= h_h;
    if (census_ && (est.v_high > est.v_b_plus + kOrderSlack || est.v_b_plus > est.v_a + kOrderSlack)) {
      s.violations += 1;
    }
  }

  double tau() const noexcept { return tau_; }

 private:
  const PotentialOutcomeTable& table_;
  const ExperimentDesign& design_;
  QuantilePartition partition_;
  double tau_;
  double z_;
  bool census_;
};

EstimatorSummary summarize(double estimate_sum, double width_sum, std::uint64_t covered, std::uint64_t n) {
  EstimatorSummary s;
  if (n == 0) return s;
  const auto r = static_cast<double>(n);
  s.mean_estimate = estimate_sum / r;
  s.mean_width = width_sum / r;
  s.covered = covered;
  s.coverage = static_cast<double>(covered) / r;
  return s;
}

SimulationReport make_report(const PotentialOutcomeTable& table, const ExperimentDesign& design,
                             double level, const Sums& s) {
  SimulationReport rep;
  rep.replicates = s.count;
  rep.level = level;
  rep.design = design;
  rep.true_effect = true_average_effect(table);
  rep.true_variance = true_variance(table, design);
  const Interval limits = sharp_variance_limits(table, design);
  rep.sharp_lower_limit = limits.lower;
  rep.sharp_upper_limit = limits.upper;
  rep.conventional = summarize(s.v_a, s.w_a, s.c_a, s.count);
  rep.neyman_upper = summarize(s.v_b_plus, s.w_b_plus, s.c_b_plus, s.count);
  rep.sharp_upper = summarize(s.v_high, s.w_high, s.c_high, s.count);
  rep.width_order_violations = s.violations;
  rep.coverage_defined = s.count > 0;
  if (s.count > 0) {
    const auto r = static_cast<double>(s.count);
    rep.mean_tau_hat = s.tau / r;
    rep.tau_hat_variance = s.tau_sq_err / r;
    rep.mean_v_b_minus = s.v_b_minus / r;
    rep.mean_v_low = s.v_low / r;
    if (rep.sharp_upper.mean_estimate > 0.0) rep.gamma_hat = rep.true_variance / rep.sharp_upper.mean_estimate;
  }
  return rep;
}

void check_simulation_inputs(const PotentialOutcomeTable& table, const ExperimentDesign& design, double level) {
  if (design.is_infinite()) fail(ErrorCode::InvalidDesign, "simulation needs a finite population");
  if (design.population().count() != table.size()) {
    fail(ErrorCode::InvalidDesign, "design population size " + std::to_string(design.population().count()) +
                                       " does not match table length " + std::to_string(table.size()));
  }
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::InvalidInput, "confidence level must lie in (0, 1)");
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

PotentialOutcomeTable impute(const ObservedExperiment& observed, const EffectHypothesis& hypothesis) {
  if (!observed.design().is_census()) {
    fail(ErrorCode::InvalidDesign, "imputation needs every population unit observed (n = N)");
  }
  const auto yt = observed.treated().values();
  const auto yc = observed.control().values();
  const std::size_t m = yt.size();
  const std::size_t total = m + yc.size();
  std::vector<double> y1(total), y0(total);
  const double shift = hypothesis.kind() == EffectHypothesis::Kind::ConstantEffect ? hypothesis.tau() : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    y1[i] = yt[i];
    y0[i] = yt[i] - shift;
  }
  for (std::size_t i = 0; i < yc.size(); ++i) {
    y0[m + i] = yc[i];
    y1[m + i] = yc[i] + shift;
  }
  for (const TableEdit& e : hypothesis.edits()) {
    if (e.index >= total) {
      fail(ErrorCode::InvalidInput, "edit index " + std::to_string(e.index) + " outside table of " +
                                        std::to_string(total) + " rows");
    }
    const bool treated_row = e.index < m;
    const bool touches_observed = (e.outcome == PotentialOutcome::Treated) == treated_row;
    if (touches_observed) {
      fail(ErrorCode::InvalidInput, "edit at row " + std::to_string(e.index) + " overrides an observed outcome");
    }
    (e.outcome == PotentialOutcome::Treated ? y1 : y0)[e.index] = e.value;
  }
  return {OutcomeVector(std::move(y1)), OutcomeVector(std::move(y0))};
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("SHARPVAR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

SimulationReport run_monte_carlo(const PotentialOutcomeTable& table, const ExperimentDesign& design,
                                 const MonteCarloOptions& options) {
  check_simulation_inputs(table, design, options.level);
  const ReplicateScorer scorer(table, design, options.level);
  const std::uint64_t blocks = (options.replicates + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<Sums> partial(static_cast<std::size_t>(blocks));

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      Rng rng = make_stream(options.seed, b);
      const std::uint64_t begin = b * kReplicateBlock;
      const std::uint64_t end = std::min(options.replicates, begin + kReplicateBlock);
      Sums& s = partial[static_cast<std::size_t>(b)];
      for (std::uint64_t r = begin; r < end; ++r) scorer.score(draw_assignment(design, rng), s);
    }
  };

  const unsigned requested = options.threads ? options.threads : default_thread_count();
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(requested, std::max<std::uint64_t>(blocks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  Sums total;
  for (const Sums& s : partial) total.merge(s);
  SimulationReport rep = make_report(table, design, options.level, total);
  rep.seed = options.seed;
  return rep;
}

SimulationReport run_exhaustive(const PotentialOutcomeTable& table, const ExperimentDesign& design, double level) {
  check_simulation_inputs(table, design, level);
  const ReplicateScorer scorer(table, design, level);
  Sums total;
  for_each_assignment(design, [&](const Assignment& a) { scorer.score(a, total); });
  SimulationReport rep = make_report(table, design, level, total);
  rep.exact = true;
  return rep;
}

ExperimentDesign AsymptoticRegime::design_for(std::size_t population) const {
  if (!(theta > 0.0 && theta <= 1.0) || !(rho > 0.0 && rho < 1.0)) {
    fail(ErrorCode::InvalidDesign, "regime needs theta in (0, 1] and rho in (0, 1)");
  }
  const auto n = static_cast<std::size_t>(std::ceil(theta * static_cast<double>(population)));
  const auto m = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n)));
  return {PopulationSize::finite(population), std::min(n, population), m};
}

std::vector<ConvergencePoint> convergence_study(const AsymptoticRegime& regime,
                                                const SuperpopulationSampler& sampler,
                                                std::size_t replicates, std::uint64_t seed) {
  if (regime.population_sizes.empty()) return {};
  if (!sampler) fail(ErrorCode::InvalidInput, "convergence study needs a sampler");
  const std::size_t largest = *std::max_element(regime.population_sizes.begin(), regime.population_sizes.end());
  for (std::size_t big_n : regime.population_sizes) (void)regime.design_for(big_n);

  std::vector<double> all_y1(largest), all_y0(largest);
  Rng population_rng = make_stream(seed, 0);
  for (std::size_t i = 0; i < largest; ++i) std::tie(all_y1[i], all_y0[i]) = sampler(population_rng);

  std::vector<ConvergencePoint> out;
  for (std::size_t g = 0; g < regime.population_sizes.size(); ++g) {
    const std::size_t big_n = regime.population_sizes[g];
    const ExperimentDesign design = regime.design_for(big_n);
    const PotentialOutcomeTable table(
        OutcomeVector({all_y1.begin(), all_y1.begin() + static_cast<std::ptrdiff_t>(big_n)}),
        OutcomeVector({all_y0.begin(), all_y0.begin() + static_cast<std::ptrdiff_t>(big_n)}));
    const Interval limits = sharp_variance_limits(table, design);
    const auto partition = build_partition(design.treated(), design.control());
    Rng rng = make_stream(seed, g + 1);
    std::vector<double> err_high(replicates), err_low(replicates);
    const auto scale = static_cast<double>(big_n);
    for (std::size_t r = 0; r < replicates; ++r) {
      const auto est = estimate_all(observe(table, design, draw_assignment(design, rng)), partition);
      err_high[r] = scale * std::fabs(est.v_high - limits.upper);
      err_low[r] = scale * std::fabs(est.v_low - limits.lower);
    }
    out.push_back({big_n, design.sample_size(), design.treated(), limits.upper, limits.lower,
                   median(std::move(err_high)), median(std::move(err_low))});
  }
  return out;
}

}  // namespace sharpvar
