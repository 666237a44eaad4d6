#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "stable_sde/error.hpp"
#include "stable_sde/harness.hpp"

using namespace stable_sde;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("stable_sde_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void expect_same_tree(const fs::path& a, const fs::path& b) {
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto other = b / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path().filename();
    ++files;
  }
  EXPECT_GT(files, 0u);
}

}  // namespace

TEST(ParseConfig, DefaultsPerExperiment) {
  const auto ladder = parse("experiment = ladder-monotone\n");
  EXPECT_EQ(ladder.experiment, Experiment::ladder_monotone);
  EXPECT_EQ(ladder.alpha, 0.7);
  EXPECT_EQ(ladder.cutoffs, (std::vector<double>{0.1, 0.03, 0.01, 0.003, 0.001}));
  EXPECT_EQ(ladder.replicates, 1000u);
  EXPECT_EQ(ladder.phi, "shifted-arctan(2,0.6366)");

  const auto ce = parse("experiment = counterexample");
  EXPECT_EQ(ce.alpha, 0.5);
  EXPECT_EQ(ce.beta, 0.5);
  EXPECT_EQ(ce.replicates, 5000u);
  EXPECT_EQ(ce.grid_m, 10000u);

  const auto couple = parse("experiment = uniqueness-couple");
  EXPECT_EQ(couple.alpha, 0.1);
  EXPECT_EQ(couple.c, 10.0);
}

TEST(ParseConfig, OverridesCommentsAndQuotes) {
  const auto cfg = parse(
      "# a comment\n"
      "experiment = strong-construct\n"
      "alpha = 0.4   # trailing comment\n"
      "phi = \"soft-ramp(1, 0.5)\"\n"
      "cutoffs = 0.1, 0.01\r\n"
      "N = 7\n"
      "seed = 0x10\n"
      "T = 2\n"
      "\n");
  EXPECT_EQ(cfg.alpha, 0.4);
  EXPECT_EQ(cfg.phi, "soft-ramp(1, 0.5)");
  EXPECT_EQ(cfg.cutoffs, (std::vector<double>{0.1, 0.01}));
  EXPECT_EQ(cfg.replicates, 7u);
  EXPECT_EQ(cfg.seed, 16u);
  EXPECT_EQ(cfg.horizon, 2.0);
}

TEST(ParseConfig, StrictErrors) {
  EXPECT_THROW(parse("alpha = 0.5\n"), ConfigError);
  EXPECT_THROW(parse("experiment = warp-drive\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nalpah = 0.5\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nalpha = 0.5\nalpha = 0.6\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\njust words\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nalpha = 1.5\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nalpha = abc\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nN = -3\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nN = 0\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\ncutoffs = 0.01, 0.1\n"), ConfigError);
  // β belongs to the counterexample only; power φ likewise.
  EXPECT_THROW(parse("experiment = weak-agree\nbeta = 0.5\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nphi = power(0.5)\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nphi = constant(0)\n"), ConfigError);
  EXPECT_THROW(parse("experiment = strong-construct\nphi = wobble(1)\n"), ConfigError);
  EXPECT_THROW(parse("experiment = counterexample\nbeta = 1\n"), ConfigError);
  EXPECT_THROW(parse("experiment = counterexample\ngrid_m = 50\n"), ConfigError);
  EXPECT_THROW(parse("experiment = counterexample\nN = 500\n"), ConfigError);
  EXPECT_THROW(parse("experiment = weak-agree\nphi = soft-ramp(1,1)\n"), ConfigError);
  EXPECT_NO_THROW(parse("experiment = weak-agree\nphi = soft-ramp(1,1)\ndriver_T = 5\n"));
  EXPECT_THROW(load_config("/nonexistent/stable_sde.cfg"), ConfigError);
}

TEST(RunExperiment, StrongConstructArtifacts) {
  auto cfg = parse("experiment = strong-construct\nN = 20\n");
  cfg.output = scratch("strong");
  const auto r = run_experiment(cfg);
  EXPECT_EQ(r.status, ExitStatus::pass);
  for (const char* f : {"driver.csv", "solution.csv", "terminal.csv", "summary.csv"}) {
    EXPECT_TRUE(fs::exists(cfg.output / f)) << f;
  }
  EXPECT_EQ(slurp(cfg.output / "summary.csv").substr(0, 26), "name,value,threshold,pass\n");
  EXPECT_EQ(slurp(cfg.output / "solution.csv").substr(0, 15), "t,x_pre,x_post\n");
}

TEST(RunExperiment, LadderOneReplicateOneCutoffPasses) {
  auto cfg = parse("experiment = ladder-monotone\nN = 1\ncutoffs = 0.01\n");
  cfg.output = scratch("ladder1");
  EXPECT_EQ(run_experiment(cfg).status, ExitStatus::pass);
  EXPECT_EQ(slurp(cfg.output / "ladder.csv").substr(0, 8), "eps,t,x\n");
}

TEST(RunExperiment, WeakAgreeConstantPhi) {
  auto cfg = parse("experiment = weak-agree\nphi = constant(1)\nN = 1000\ncutoffs = 0.01\n");
  cfg.output = scratch("weak");
  const auto r = run_experiment(cfg);
  EXPECT_EQ(r.status, ExitStatus::pass);
  for (const auto& row : r.summary) {
    if (row.name == "max_clock_roundtrip_residual") {
      EXPECT_EQ(row.value, 0.0);
    }
    if (row.name == "time_change_coverage") {
      EXPECT_EQ(row.value, 1.0);
    }
  }
  EXPECT_TRUE(fs::exists(cfg.output / "clock.csv"));
  EXPECT_TRUE(fs::exists(cfg.output / "marginals.csv"));
}

TEST(RunExperiment, StatisticalFailureExitCode) {
  auto cfg = parse("experiment = weak-agree\nN = 1000\ncutoffs = 0.01\nks_p_threshold = 1\n");
  cfg.output = scratch("statfail");
  const auto r = run_experiment(cfg);
  EXPECT_EQ(r.status, ExitStatus::statistical_failure);
  EXPECT_FALSE(r.failures.empty());
}

TEST(RunExperiment, InvariantViolationExitCodeNamesTheSeed) {
  auto cfg = parse(
      "experiment = weak-agree\nN = 50\ncutoffs = 0.01\nroundtrip_tolerance = 0\n"
      "phi = shifted-arctan(2,0.6366)\n");
  cfg.output = scratch("invfail");
  const auto r = run_experiment(cfg);
  EXPECT_EQ(r.status, ExitStatus::invariant_violation);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_NE(r.failures.front().find("seed"), std::string::npos);
  EXPECT_NE(r.failures.front().find("clock round trip"), std::string::npos);
}

TEST(RunExperiment, UniquenessCoupleArtifacts) {
  auto cfg = parse("experiment = uniqueness-couple\nN = 50\n");
  cfg.output = scratch("couple");
  run_experiment(cfg);
  const auto text = slurp(cfg.output / "coupling.csv");
  EXPECT_EQ(text.substr(0, 31), "eps,median_distance,mean_distan");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}

TEST(RunExperiment, CounterexampleSmall) {
  auto cfg = parse("experiment = counterexample\nN = 1000\nv_law_N = 1000\ngrid_m = 100\n"
                   "divergence_steps = 50\n");
  cfg.output = scratch("ce");
  const auto r = run_experiment(cfg);
  EXPECT_NE(r.status, ExitStatus::invariant_violation);
  const auto report = slurp(cfg.output / "report.csv");
  EXPECT_EQ(report.substr(0, 52), "check,statistic,p_value,coverage,n,alpha,beta,grid_m");
  for (const char* check : {"scaling_law,", "v_law,", "v_law_median_ratio,",
                            "nonuniqueness_positive_fraction,", "zero_solution_residual,0,",
                            "divergence_t=100,"}) {
    EXPECT_NE(report.find(check), std::string::npos) << check;
  }
}

TEST(RunExperiment, ByteIdenticalAcrossRepeatsAndThreads) {
  for (const char* text :
       {"experiment = strong-construct\nN = 30\n", "experiment = ladder-monotone\nN = 30\n",
        "experiment = weak-agree\nN = 300\ncutoffs = 0.01\n",
        "experiment = uniqueness-couple\nN = 30\n"}) {
    auto a = parse(text);
    a.output = scratch("det_a");
    auto b = a;
    b.output = scratch("det_b");
    b.threads = 3;
    run_experiment(a);
    run_experiment(b);
    expect_same_tree(a.output, b.output);
  }
}

TEST(RunExperiment, ReplicateIndependence) {
  // Replicate k's terminal value does not depend on N.
  auto small = parse("experiment = strong-construct\nN = 5\n");
  small.output = scratch("ind_small");
  auto large = small;
  large.replicates = 12;
  large.output = scratch("ind_large");
  run_experiment(small);
  run_experiment(large);
  const auto s = slurp(small.output / "terminal.csv");
  const auto l = slurp(large.output / "terminal.csv");
  EXPECT_EQ(l.substr(0, s.size()), s);
}

TEST(SummaryCsv, Format) {
  std::ostringstream out;
  write_summary_csv(out, {{"ks_p_value", 0.5, 0.01, true}, {"violations", 2, 0, false}});
  EXPECT_EQ(out.str(), "name,value,threshold,pass\nks_p_value,0.5,0.01,true\nviolations,2,0,false\n");
}
