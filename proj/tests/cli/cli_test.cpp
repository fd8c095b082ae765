#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include "json.hpp"
#include <string>

namespace {

const std::string kCli = SHARPVAR_CLI;
const std::string kData = SHARPVAR_TEST_DATA;

struct Run {
  int exit_code = -1;
  std::string out;
};

// stdout only; stderr goes to /dev/null.
Run run(const std::string& args) {
  Run r;
  FILE* pipe = popen(("'" + kCli + "' " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string stderr_of(const std::string& args) {
  Run r;
  FILE* pipe = popen(("'" + kCli + "' " + args + " 2>&1 >/dev/null").c_str(), "r");
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  pclose(pipe);
  return r.out;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

TEST(Cli, EstimateHandExample) {
  const auto r = run("estimate --input " + kData + "/small.csv");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], "1");
  EXPECT_NEAR(j["estimates"]["v_high"].get<double>(), 0.958333, 1e-6);
  EXPECT_NEAR(j["estimates"]["v_low"].get<double>(), 0.291666, 1e-6);
  EXPECT_EQ(r.out.find("timestamp"), std::string::npos);
  EXPECT_NE(run("estimate --input " + kData + "/small.csv --timestamp").out.find("timestamp"), std::string::npos);
}

TEST(Cli, EstimateErrors) {
  EXPECT_EQ(run("estimate --input " + kData + "/nan_outcome.csv").exit_code, 2);
  EXPECT_NE(stderr_of("estimate --input " + kData + "/nan_outcome.csv").find("line 3"), std::string::npos);
  EXPECT_EQ(run("estimate --input " + kData + "/small.csv --population-size 3").exit_code, 3);
  EXPECT_EQ(run("estimate --input " + kData + "/missing.csv").exit_code, 2);
  EXPECT_EQ(run("estimate --input " + kData + "/small.csv --population-size lots").exit_code, 2);
  EXPECT_EQ(run("estimate --input " + kData + "/small.csv --format xml").exit_code, 2);
  EXPECT_EQ(run("estimate").exit_code, 2);
  EXPECT_EQ(run("").exit_code, 2);
  const auto one_arm = write_temp("one_arm.csv", "arm,outcome\ntreat,1\ntreat,2\ncontrol,1\n");
  EXPECT_EQ(run("estimate --input " + one_arm).exit_code, 3);
}

TEST(Cli, EstimateTsvMatchesJson) {
  const auto json = nlohmann::json::parse(run("estimate --input " + kData + "/sim_input.csv").out);
  const auto tsv = run("estimate --input " + kData + "/sim_input.csv --format tsv").out;
  for (const char* key : {"v_a", "v_b_plus", "v_b_minus", "v_high", "v_low", "tau_hat"}) {
    const std::string metric = std::string("estimates.") + key + "\t";
    const auto pos = tsv.find(metric);
    ASSERT_NE(pos, std::string::npos) << key;
    const double value = std::stod(tsv.substr(pos + metric.size()));
    EXPECT_EQ(value, json["estimates"][key].get<double>()) << key;
  }
}

TEST(Cli, SimulateDeterministicAndHypotheses) {
  const std::string base = "simulate --input " + kData + "/sim_input.csv --replicates 10000 --seed 5";
  const auto a = run(base + " --hypothesis sharp-null");
  const auto b = run(base + " --hypothesis sharp-null");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run(base + " --hypothesis constant:0").out, a.out);
  EXPECT_EQ(run(base).out, a.out);
  EXPECT_NE(run(base + " --hypothesis constant:1").out, a.out);
  const auto edits = run(base + " --hypothesis edits " + kData + "/edits.csv");
  ASSERT_EQ(edits.exit_code, 0);
  EXPECT_NE(edits.out, a.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["kind"], "simulation");
  EXPECT_EQ(j["inputs"]["seed"], 5);
  EXPECT_FALSE(j["exact"].get<bool>());
}

TEST(Cli, SimulateExhaustive) {
  const auto table = write_temp("six.csv", "y1,y0\n1,0\n2,2\n5,3\n1,1\n0,4\n3,3\n");
  const auto r = run("simulate --table " + table + " --treated 3 --replicates exhaustive");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["exact"].get<bool>());
  EXPECT_EQ(j["inputs"]["replicates"], 20);
  EXPECT_NEAR(j["summary"]["tau_hat_variance"].get<double>(), j["truth"]["variance"].get<double>(), 1e-12);
}

TEST(Cli, SimulateErrors) {
  const std::string in = " --input " + kData + "/sim_input.csv";
  EXPECT_EQ(run("simulate" + in + " --population-size 80 --hypothesis sharp-null --replicates 10").exit_code, 3);
  const auto table = write_temp("t.csv", "y1,y0\n1,0\n2,2\n5,3\n1,1\n0,4\n3,3\n");
  EXPECT_EQ(run("simulate --table " + table + " --treated 3 --hypothesis sharp-null").exit_code, 2);
  EXPECT_EQ(run("simulate --table " + table).exit_code, 2);
  EXPECT_EQ(run("simulate --table " + table + " --treated 1").exit_code, 3);
  EXPECT_EQ(run("simulate" + in + " --hypothesis bogus").exit_code, 2);
  EXPECT_EQ(run("simulate" + in + " --hypothesis constant:x").exit_code, 2);
  EXPECT_EQ(run("simulate" + in + " --replicates many").exit_code, 2);
  EXPECT_EQ(run("simulate" + in + " --replicates exhaustive").exit_code, 3);
  EXPECT_EQ(run("simulate" + in + " --hypothesis edits " + kData + "/missing.csv").exit_code, 2);
  const auto bad_edit = write_temp("bad_edit.csv", "index,outcome,value\n0,y1,9\n");
  EXPECT_EQ(run("simulate" + in + " --hypothesis edits " + bad_edit).exit_code, 2);
  const auto r = run("simulate --table " + table + " --treated 2 --sample-size 5 --replicates 200");
  EXPECT_EQ(r.exit_code, 0);
}

TEST(Cli, Illustrate) {
  const auto r = run("illustrate --alpha0 0.1 --beta0 0.1 --alpha1 0.1 --beta1 1");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["rows"][0]["ratio_vs_conventional"].get<double>(), 0.68, 0.02);
  EXPECT_NEAR(j["rows"][0]["ratio_vs_neyman_upper"].get<double>(), 0.79, 0.02);

  const auto sweep = nlohmann::json::parse(run("illustrate --table3").out);
  ASSERT_EQ(sweep["rows"].size(), 18u);
  EXPECT_NEAR(sweep["rows"][0]["ratio_vs_conventional"].get<double>(), 1.0, 0.005);
  EXPECT_NEAR(sweep["rows"][0]["ratio_vs_neyman_upper"].get<double>(), 1.0, 0.005);

  EXPECT_EQ(run("illustrate --alpha0 0.1 --beta0 0.1 --alpha1 0 --beta1 1").exit_code, 2);
  EXPECT_EQ(run("illustrate --alpha0 0.1 --beta0 -1 --alpha1 1 --beta1 1").exit_code, 2);
  EXPECT_EQ(run("illustrate --alpha0 0.1").exit_code, 2);
  EXPECT_EQ(run("illustrate --table3 --alpha0 1").exit_code, 2);
  EXPECT_EQ(run("illustrate --table3 --grid-size 0").exit_code, 2);
}

}  // namespace
