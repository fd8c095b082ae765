#include <gtest/gtest.h>
#include <sharpvar/sharpvar.h>

#include <cmath>
#include <string>
#include <vector>

namespace {

const std::string kData = SHARPVAR_TEST_DATA;

struct ExperimentHandle {
  sv_experiment* ptr = nullptr;
  ~ExperimentHandle() { sv_experiment_destroy(ptr); }
};
struct TableHandle {
  sv_table* ptr = nullptr;
  ~TableHandle() { sv_table_destroy(ptr); }
};
struct HypothesisHandle {
  sv_hypothesis* ptr = nullptr;
  ~HypothesisHandle() { sv_hypothesis_destroy(ptr); }
};
struct ReportHandle {
  sv_report* ptr = nullptr;
  ~ReportHandle() { sv_report_destroy(ptr); }
};

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(sv_version(), "");
  EXPECT_STREQ(sv_status_name(SV_OK), "ok");
  EXPECT_STRNE(sv_status_name(SV_ERR_PARSE), sv_status_name(SV_ERR_IO));
  EXPECT_STRNE(sv_status_name(static_cast<sv_status>(99)), "");
}

TEST(CApi, EstimateHandExample) {
  const double t[] = {0, 1}, c[] = {0, 2};
  ExperimentHandle e;
  ASSERT_EQ(sv_experiment_create(t, 2, c, 2, SV_POPULATION_SAMPLE, &e.ptr), SV_OK);
  uint64_t pop = 0;
  size_t n = 0, m = 0;
  ASSERT_EQ(sv_experiment_design(e.ptr, &pop, &n, &m), SV_OK);
  EXPECT_EQ(pop, 4u);
  EXPECT_EQ(n, 4u);
  EXPECT_EQ(m, 2u);

  sv_estimates est;
  ASSERT_EQ(sv_estimate(e.ptr, &est), SV_OK);
  EXPECT_DOUBLE_EQ(est.tau_hat, -0.5);
  EXPECT_NEAR(est.v_a, 1.25, 1e-15);
  EXPECT_NEAR(est.v_b_plus, 1.125, 1e-15);
  EXPECT_NEAR(est.v_b_minus, 0.125, 1e-15);
  EXPECT_NEAR(est.v_high, 23.0 / 24.0, 1e-15);
  EXPECT_NEAR(est.v_low, 7.0 / 24.0, 1e-15);
  EXPECT_EQ(est.clamped, 0u);
  EXPECT_EQ(est.neyman_heuristic, 0);

  sv_interval ci;
  ASSERT_EQ(sv_wald_interval(est.tau_hat, est.v_high, 0.95, &ci), SV_OK);
  EXPECT_NEAR(ci.lower, -2.4187, 5e-4);
  EXPECT_NEAR(ci.upper, 1.4187, 5e-4);
}

TEST(CApi, InfinitePopulation) {
  const double t[] = {0, 2}, c[] = {0, 2};
  ExperimentHandle e;
  ASSERT_EQ(sv_experiment_create(t, 2, c, 2, SV_POPULATION_INFINITE, &e.ptr), SV_OK);
  uint64_t pop = 0;
  ASSERT_EQ(sv_experiment_design(e.ptr, &pop, nullptr, nullptr), SV_OK);
  EXPECT_EQ(pop, SV_POPULATION_INFINITE);
  sv_estimates est;
  ASSERT_EQ(sv_estimate(e.ptr, &est), SV_OK);
  EXPECT_EQ(est.infinite_population, 1);
  EXPECT_DOUBLE_EQ(est.v_high, 2.0);
  EXPECT_DOUBLE_EQ(est.v_low, 2.0);
}

TEST(CApi, ErrorPaths) {
  const double t[] = {0, 1}, c[] = {0, 2}, bad[] = {0, NAN};
  sv_experiment* e = nullptr;
  EXPECT_EQ(sv_experiment_create(t, 1, c, 2, SV_POPULATION_SAMPLE, &e), SV_ERR_INVALID_DESIGN);
  EXPECT_EQ(e, nullptr);
  EXPECT_STRNE(sv_last_error(), "");
  EXPECT_EQ(sv_experiment_create(t, 2, c, 2, 3, &e), SV_ERR_INVALID_DESIGN);
  EXPECT_EQ(sv_experiment_create(bad, 2, c, 2, SV_POPULATION_SAMPLE, &e), SV_ERR_INVALID_INPUT);
  EXPECT_EQ(sv_experiment_create(nullptr, 2, c, 2, SV_POPULATION_SAMPLE, &e), SV_ERR_INVALID_INPUT);
  EXPECT_EQ(sv_experiment_create(t, 2, c, 2, SV_POPULATION_SAMPLE, nullptr), SV_ERR_INVALID_INPUT);
  EXPECT_EQ(sv_estimate(nullptr, nullptr), SV_ERR_INVALID_INPUT);

  EXPECT_EQ(sv_experiment_load_csv((kData + "/missing.csv").c_str(), 0, &e), SV_ERR_IO);
  EXPECT_EQ(sv_experiment_load_csv((kData + "/nan_outcome.csv").c_str(), 0, &e), SV_ERR_PARSE);
  EXPECT_NE(std::string(sv_last_error()).find("line"), std::string::npos);

  sv_interval ci;
  EXPECT_EQ(sv_wald_interval(0, -1, 0.95, &ci), SV_ERR_INVALID_INPUT);
  double z = 0;
  EXPECT_EQ(sv_inverse_normal_cdf(1.0, &z), SV_ERR_INVALID_INPUT);
  ASSERT_EQ(sv_inverse_normal_cdf(0.975, &z), SV_OK);
  EXPECT_NEAR(z, 1.959964, 1e-6);
  EXPECT_STREQ(sv_last_error(), "");

  sv_report* r = nullptr;
  EXPECT_EQ(sv_report_illustrate(0.1, 0.1, 0.0, 1.0, 1000, &r), SV_ERR_INVALID_INPUT);
  EXPECT_EQ(r, nullptr);

  sv_experiment_destroy(nullptr);
  sv_table_destroy(nullptr);
  sv_hypothesis_destroy(nullptr);
  sv_report_destroy(nullptr);
}

TEST(CApi, ImputeAndTables) {
  ExperimentHandle e;
  ASSERT_EQ(sv_experiment_load_csv((kData + "/small.csv").c_str(), 0, &e.ptr), SV_OK);
  HypothesisHandle h;
  ASSERT_EQ(sv_hypothesis_constant(1.0, &h.ptr), SV_OK);
  TableHandle t;
  ASSERT_EQ(sv_table_impute(e.ptr, h.ptr, &t.ptr), SV_OK);
  ASSERT_EQ(sv_table_rows(t.ptr), 4u);
  double y1 = 0, y0 = 0;
  ASSERT_EQ(sv_table_get(t.ptr, 3, &y1, &y0), SV_OK);
  EXPECT_EQ(y1, 3.0);
  EXPECT_EQ(y0, 2.0);
  EXPECT_EQ(sv_table_get(t.ptr, 4, &y1, &y0), SV_ERR_INVALID_INPUT);

  const size_t rows[] = {2};
  const int outcomes[] = {1};
  const double values[] = {100};
  HypothesisHandle edits;
  ASSERT_EQ(sv_hypothesis_edits(rows, outcomes, values, 1, &edits.ptr), SV_OK);
  TableHandle edited;
  ASSERT_EQ(sv_table_impute(e.ptr, edits.ptr, &edited.ptr), SV_OK);
  ASSERT_EQ(sv_table_get(edited.ptr, 2, &y1, &y0), SV_OK);
  EXPECT_EQ(y1, 100.0);

  ExperimentHandle sub;
  ASSERT_EQ(sv_experiment_load_csv((kData + "/small.csv").c_str(), 10, &sub.ptr), SV_OK);
  sv_table* none = nullptr;
  EXPECT_EQ(sv_table_impute(sub.ptr, h.ptr, &none), SV_ERR_INVALID_DESIGN);

  const double a[] = {1, 2, 3}, b[] = {1, 2};
  EXPECT_EQ(sv_table_create(a, b, 0, &none), SV_ERR_INVALID_INPUT);
}

TEST(CApi, ReportsRenderAndLookup) {
  ExperimentHandle e;
  ASSERT_EQ(sv_experiment_load_csv((kData + "/small.csv").c_str(), 0, &e.ptr), SV_OK);
  ReportHandle r;
  ASSERT_EQ(sv_report_estimate(e.ptr, 0.95, &r.ptr), SV_OK);
  double v = 0;
  ASSERT_EQ(sv_report_get_number(r.ptr, "estimates.v_high", &v), SV_OK);
  EXPECT_NEAR(v, 23.0 / 24.0, 1e-15);
  EXPECT_EQ(sv_report_get_number(r.ptr, "estimates.bogus", &v), SV_ERR_INVALID_INPUT);

  const char* json = nullptr;
  ASSERT_EQ(sv_report_render(r.ptr, SV_FORMAT_JSON, &json), SV_OK);
  const std::string first = json;
  EXPECT_EQ(first.find("timestamp"), std::string::npos);
  EXPECT_NE(first.find("\"schema_version\": \"1\""), std::string::npos);
  const char* tsv = nullptr;
  ASSERT_EQ(sv_report_render(r.ptr, SV_FORMAT_TSV, &tsv), SV_OK);
  EXPECT_NE(std::string(tsv).find("estimates.v_a\t1.25\n"), std::string::npos);
  ASSERT_EQ(sv_report_set_timestamp(r.ptr, "2026-01-01T00:00:00Z"), SV_OK);
  ASSERT_EQ(sv_report_render(r.ptr, SV_FORMAT_JSON, &json), SV_OK);
  EXPECT_NE(std::string(json).find("2026-01-01T00:00:00Z"), std::string::npos);
  EXPECT_EQ(sv_report_render(r.ptr, static_cast<sv_format>(7), &json), SV_ERR_INVALID_INPUT);
}

TEST(CApi, SimulationIsIndependentOfThreadCount) {
  std::vector<double> y(40);
  for (size_t i = 0; i < y.size(); ++i) y[i] = std::sin(1.7 * i) * 3;
  TableHandle t;
  ASSERT_EQ(sv_table_create(y.data(), y.data(), y.size(), &t.ptr), SV_OK);
  sv_simulation_options opt;
  sv_simulation_options_init(&opt);
  opt.replicates = 3000;
  opt.seed = 11;
  std::string reference;
  for (unsigned threads : {1u, 2u, 5u}) {
    opt.threads = threads;
    ReportHandle r;
    ASSERT_EQ(sv_report_simulate(t.ptr, 0, 20, &opt, &r.ptr), SV_OK);
    const char* text = nullptr;
    ASSERT_EQ(sv_report_render(r.ptr, SV_FORMAT_JSON, &text), SV_OK);
    if (reference.empty()) reference = text;
    EXPECT_EQ(reference, text);
  }

  opt.exhaustive = 1;
  ReportHandle exhaustive;
  EXPECT_EQ(sv_report_simulate(t.ptr, 0, 20, &opt, &exhaustive.ptr), SV_ERR_TOO_LARGE);

  TableHandle small;
  ASSERT_EQ(sv_table_create(y.data(), y.data(), 6, &small.ptr), SV_OK);
  ReportHandle exact;
  ASSERT_EQ(sv_report_simulate(small.ptr, 0, 3, &opt, &exact.ptr), SV_OK);
  double count = 0;
  ASSERT_EQ(sv_report_get_number(exact.ptr, "inputs.replicates", &count), SV_OK);
  EXPECT_EQ(count, 20.0);
}

TEST(CApi, Illustration) {
  ReportHandle r;
  ASSERT_EQ(sv_report_illustrate(0.1, 0.1, 0.1, 1.0, 100000, &r.ptr), SV_OK);
  double a = 0, b = 0;
  ASSERT_EQ(sv_report_get_number(r.ptr, "rows.1.ratio_vs_conventional", &a), SV_OK);
  ASSERT_EQ(sv_report_get_number(r.ptr, "rows.1.ratio_vs_neyman_upper", &b), SV_OK);
  EXPECT_NEAR(a, 0.68, 0.02);
  EXPECT_NEAR(b, 0.79, 0.02);
}

}  // namespace
