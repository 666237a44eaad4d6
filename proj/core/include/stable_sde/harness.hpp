#pragma once

// Experiment orchestration behind the `stable-sde-lab` CLI.
//
// A config is a flat `key = value` file ('#' starts a comment). Unknown or
// repeated keys are errors. Every experiment writes its CSV artifacts plus
// `summary.csv` (name,value,threshold,pass) into the output directory and
// returns one of the ExitStatus codes.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stable_sde {

enum class Experiment {
  strong_construct,
  ladder_monotone,
  weak_agree,
  uniqueness_couple,
  counterexample,
};

std::string_view to_string(Experiment e);

enum class ExitStatus : int {
  pass = 0,
  statistical_failure = 1,
  invariant_violation = 2,
  config_error = 3,
};

struct ExperimentConfig {
  Experiment experiment = Experiment::strong_construct;
  double alpha = 0.7;
  std::optional<double> c;     // Lévy scale; default α/Γ(1-α)
  std::optional<double> beta;  // counterexample only
  std::string phi = "shifted-arctan(2,0.6366)";
  double x0 = 0.0;
  double horizon = 1.0;  // key `T`
  std::vector<double> cutoffs;
  std::size_t grid_m = 10000;
  std::size_t replicates = 100;  // key `N`
  std::uint64_t seed = 1;
  std::filesystem::path output = ".";
  unsigned threads = 1;

  // Pass/fail policy.
  double ks_p_threshold = 0.01;
  double positive_fraction_threshold = 0.99;
  double coupling_ratio_threshold = 0.1;
  double roundtrip_tolerance = 1e-9;
  double min_coverage = 0.8;

  // weak-agree: horizon of the time-change driver (default T·sup φ^α).
  std::optional<double> driver_horizon;
  double overflow_guard = 1e300;

  // counterexample
  double t1 = 1.0;
  double t2 = 2.0;
  double counterexample_horizon = 4.0;
  // The V-law KS gets its own replicate count: grid bias in V_1 is detectable
  // once n reaches ~5000 at grid_m = 1e4.
  std::size_t v_law_replicates = 2000;  // key `v_law_N`
  double divergence_level = 5.0;
  std::vector<double> divergence_times{1.0, 10.0, 100.0};
  std::size_t divergence_steps = 1000;
};

/// Parses a config stream. Experiment-specific defaults are applied first,
/// then every key in the file overrides them. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-checks parameter domains (e.g. after CLI overrides). Throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

struct SummaryRow {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct ExperimentResult {
  ExitStatus status = ExitStatus::pass;
  std::vector<SummaryRow> summary;
  /// Human-readable failure descriptions (violated invariant, replicate seed).
  std::vector<std::string> failures;
};

/// Runs the configured experiment, writing artifacts into cfg.output.
/// Library errors surface as ConfigError (bad parameters) or propagate.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace stable_sde
