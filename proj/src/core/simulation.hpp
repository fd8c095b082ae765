#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "estimators.hpp"
#include "finite_population.hpp"
#include "randomization.hpp"

namespace sharpvar {

enum class PotentialOutcome { Treated, Control };

/// One overridden cell of the imputed table. `index` is the row of the
/// imputed table: treated units in input order, then control units.
struct TableEdit {
  std::size_t index = 0;
  PotentialOutcome outcome = PotentialOutcome::Treated;
  double value = 0.0;
  friend bool operator==(const TableEdit&, const TableEdit&) = default;
};

/// How the unobserved potential outcomes are filled in.
class EffectHypothesis {
 public:
  enum class Kind { SharpNull, ConstantEffect, TableEdits };

  static EffectHypothesis sharp_null() { return EffectHypothesis(Kind::SharpNull, 0.0, {}); }
  static EffectHypothesis constant_effect(double tau) { return EffectHypothesis(Kind::ConstantEffect, tau, {}); }
  /// Sharp null, then the listed edits applied in order.
  static EffectHypothesis table_edits(std::vector<TableEdit> edits) {
    return EffectHypothesis(Kind::TableEdits, 0.0, std::move(edits));
  }

  Kind kind() const noexcept { return kind_; }
  double tau() const noexcept { return tau_; }
  const std::vector<TableEdit>& edits() const noexcept { return edits_; }

 private:
  EffectHypothesis(Kind kind, double tau, std::vector<TableEdit> edits)
      : kind_(kind), tau_(tau), edits_(std::move(edits)) {}
  Kind kind_;
  double tau_;
  std::vector<TableEdit> edits_;
};

/// Full potential-outcome table implied by `observed` under `hypothesis`.
/// Needs n = N; edits may only touch unobserved cells.
PotentialOutcomeTable impute(const ObservedExperiment& observed, const EffectHypothesis& hypothesis);

struct EstimatorSummary {
  double mean_estimate = 0.0;
  double mean_width = 0.0;
  std::uint64_t covered = 0;
  double coverage = 0.0;  // covered / replicates; 0 when undefined
};

struct SimulationReport {
  std::uint64_t replicates = 0;
  bool exact = false;  // full enumeration instead of sampling
  std::uint64_t seed = 0;
  double level = kDefaultLevel;
  ExperimentDesign design = ExperimentDesign::census(4, 2);

  double true_effect = 0.0;
  double true_variance = 0.0;
  double sharp_upper_limit = 0.0;  // population V^H
  double sharp_lower_limit = 0.0;  // population V^L

  double mean_tau_hat = 0.0;
  double tau_hat_variance = 0.0;  // mean of (tau_hat - tau)^2
  EstimatorSummary conventional;   // V^a
  EstimatorSummary neyman_upper;   // V^{b+}
  EstimatorSummary sharp_upper;    // V^H
  double mean_v_b_minus = 0.0;
  double mean_v_low = 0.0;
  /// true variance / mean V^H.
  double gamma_hat = 0.0;
  /// Replicates where width(V^H) <= width(V^{b+}) <= width(V^a) failed
  /// beyond 1e-10 slack. Only tracked when n = N.
  std::uint64_t width_order_violations = 0;
  bool coverage_defined = false;
};

struct MonteCarloOptions {
  std::uint64_t replicates = 10000;
  double level = kDefaultLevel;
  std::uint64_t seed = 1;
  /// 0: SHARPVAR_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
};

/// Replicates per independent stream; block b draws from make_stream(seed, b).
inline constexpr std::uint64_t kReplicateBlock = 1024;

/// Seeded Monte Carlo over random assignments. Blocks may run concurrently;
/// partial sums are reduced in block order, so the report depends only on
/// (table, design, options) and not on thread count.
SimulationReport run_monte_carlo(const PotentialOutcomeTable& table, const ExperimentDesign& design,
                                 const MonteCarloOptions& options);

/// Same report computed over every assignment (exact = true).
SimulationReport run_exhaustive(const PotentialOutcomeTable& table, const ExperimentDesign& design,
                                double level = kDefaultLevel);

/// Worker count from SHARPVAR_THREADS, falling back to hardware concurrency.
unsigned default_thread_count();

struct AsymptoticRegime {
  double theta = 1.0;  // lim n/N in (0, 1]
  double rho = 0.5;    // lim m/n in (0, 1)
  std::vector<std::size_t> population_sizes;

  /// (N, ceil(theta N), ceil(rho n)); InvalidDesign if any is invalid.
  ExperimentDesign design_for(std::size_t population) const;
};

using SuperpopulationSampler = std::function<std::pair<double, double>(Rng&)>;  // (y1, y0)

struct ConvergencePoint {
  std::size_t population = 0;
  std::size_t sample_size = 0;
  std::size_t treated = 0;
  double v_high_limit = 0.0;
  double v_low_limit = 0.0;
  double median_scaled_error_high = 0.0;  // median N |V^H_hat - V^H|
  double median_scaled_error_low = 0.0;
};

/// Draws one nested population of the largest size from `sampler` (stream 0),
/// takes prefixes for each N in the grid and measures estimator error over
/// `replicates` assignments per N (stream i + 1 for grid entry i).
std::vector<ConvergencePoint> convergence_study(const AsymptoticRegime& regime,
                                                const SuperpopulationSampler& sampler,
                                                std::size_t replicates, std::uint64_t seed);

}  // namespace sharpvar
