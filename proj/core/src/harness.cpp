#include "stable_sde/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "stable_sde/counterexample.hpp"
#include "stable_sde/csv.hpp"
#include "stable_sde/error.hpp"
#include "stable_sde/parallel.hpp"
#include "stable_sde/phi.hpp"
#include "stable_sde/stable_driver.hpp"
#include "stable_sde/stats.hpp"
#include "stable_sde/time_change_solver.hpp"
#include "stable_sde/truncation_solver.hpp"

namespace stable_sde {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::strong_construct: return "strong-construct";
    case Experiment::ladder_monotone: return "ladder-monotone";
    case Experiment::weak_agree: return "weak-agree";
    case Experiment::uniqueness_couple: return "uniqueness-couple";
    case Experiment::counterexample: return "counterexample";
  }
  return "unknown";
}

namespace {

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

std::string trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

Experiment parse_experiment(const std::string& v) {
  for (const auto e : {Experiment::strong_construct, Experiment::ladder_monotone,
                       Experiment::weak_agree, Experiment::uniqueness_couple,
                       Experiment::counterexample}) {
    if (v == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment '" + v + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    return csv::parse_real(v);
  } catch (const InvalidArgument&) {
    throw ConfigError("key '" + key + "': expected a real number, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  std::size_t pos = 0;
  try {
    if (!v.empty() && v.front() == '-') throw std::invalid_argument("negative");
    out = std::stoull(v, &pos, 0);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  if (pos != v.size()) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& field : csv::split_row(v)) out.push_back(parse_double(key, trim(field)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

ExperimentConfig defaults_for(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::strong_construct:
      cfg.alpha = 0.7;
      cfg.cutoffs = {0.001};
      cfg.replicates = 100;
      break;
    case Experiment::ladder_monotone:
      cfg.alpha = 0.7;
      cfg.cutoffs = {0.1, 0.03, 0.01, 0.003, 0.001};
      cfg.replicates = 1000;
      break;
    case Experiment::weak_agree:
      cfg.alpha = 0.5;
      cfg.cutoffs = {0.001};
      cfg.replicates = 5000;
      break;
    case Experiment::uniqueness_couple:
      cfg.alpha = 0.1;
      cfg.c = 10.0;
      cfg.cutoffs = {0.1, 0.05, 0.025, 0.0125, 0.00625};
      cfg.replicates = 500;
      break;
    case Experiment::counterexample:
      cfg.alpha = 0.5;
      cfg.beta = 0.5;
      cfg.cutoffs = {};
      cfg.replicates = 5000;
      break;
  }
  return cfg;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "alpha") cfg.alpha = parse_double(key, v);
  else if (key == "c") cfg.c = parse_double(key, v);
  else if (key == "beta") cfg.beta = parse_double(key, v);
  else if (key == "phi") cfg.phi = v;
  else if (key == "x0") cfg.x0 = parse_double(key, v);
  else if (key == "T") cfg.horizon = parse_double(key, v);
  else if (key == "cutoffs") cfg.cutoffs = parse_list(key, v);
  else if (key == "grid_m") cfg.grid_m = parse_u64(key, v);
  else if (key == "N") cfg.replicates = parse_u64(key, v);
  else if (key == "seed") cfg.seed = parse_u64(key, v);
  else if (key == "output") cfg.output = v;
  else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_u64(key, v));
  else if (key == "ks_p_threshold") cfg.ks_p_threshold = parse_double(key, v);
  else if (key == "positive_fraction_threshold") cfg.positive_fraction_threshold = parse_double(key, v);
  else if (key == "coupling_ratio_threshold") cfg.coupling_ratio_threshold = parse_double(key, v);
  else if (key == "roundtrip_tolerance") cfg.roundtrip_tolerance = parse_double(key, v);
  else if (key == "min_coverage") cfg.min_coverage = parse_double(key, v);
  else if (key == "driver_T") cfg.driver_horizon = parse_double(key, v);
  else if (key == "overflow_guard") cfg.overflow_guard = parse_double(key, v);
  else if (key == "t1") cfg.t1 = parse_double(key, v);
  else if (key == "t2") cfg.t2 = parse_double(key, v);
  else if (key == "counterexample_T") cfg.counterexample_horizon = parse_double(key, v);
  else if (key == "v_law_N") cfg.v_law_replicates = parse_u64(key, v);
  else if (key == "divergence_level") cfg.divergence_level = parse_double(key, v);
  else if (key == "divergence_times") cfg.divergence_times = parse_list(key, v);
  else if (key == "divergence_steps") cfg.divergence_steps = parse_u64(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::vector<std::string> order;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (entries.count(key)) throw ConfigError("duplicate config key '" + key + "'");
    entries.emplace(key, value);
    order.push_back(key);
  }
  const auto it = entries.find("experiment");
  if (it == entries.end()) throw ConfigError("missing required key 'experiment'");
  auto cfg = defaults_for(parse_experiment(it->second));
  for (const auto& key : order) {
    if (key == "experiment") continue;
    apply_key(cfg, key, entries.at(key));
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must lie in (0,1)");
  if (cfg.c && !(*cfg.c > 0.0 && std::isfinite(*cfg.c))) fail("c must be positive");
  if (!(cfg.horizon > 0.0 && std::isfinite(cfg.horizon))) fail("T must be positive");
  if (!std::isfinite(cfg.x0)) fail("x0 must be finite");
  if (cfg.replicates == 0) fail("N must be positive");
  if (cfg.threads == 0) fail("threads must be positive");
  if (!(cfg.ks_p_threshold >= 0.0 && cfg.ks_p_threshold <= 1.0)) fail("ks_p_threshold must lie in [0,1]");
  if (!(cfg.min_coverage >= 0.0 && cfg.min_coverage <= 1.0)) fail("min_coverage must lie in [0,1]");
  if (!(cfg.overflow_guard > 0.0)) fail("overflow_guard must be positive");

  const bool counterexample = cfg.experiment == Experiment::counterexample;
  if (counterexample) {
    if (!cfg.beta) fail("counterexample requires beta");
    if (!(*cfg.beta > 0.0 && *cfg.beta < 1.0)) fail("beta must lie in (0,1)");
    if (cfg.c) fail("counterexample uses the normalized driver; remove key 'c'");
    if (cfg.grid_m < 100) fail("grid_m must be >= 100");
    if (!(cfg.t1 > 0.0 && cfg.t1 <= cfg.t2)) fail("need 0 < t1 <= t2");
    if (!(cfg.counterexample_horizon > 0.0)) fail("counterexample_T must be positive");
    if (cfg.replicates < 1000 || cfg.v_law_replicates < 1000) {
      fail("counterexample needs N >= 1000 and v_law_N >= 1000");
    }
    for (std::size_t j = 0; j < cfg.divergence_times.size(); ++j) {
      if (!(cfg.divergence_times[j] > 0.0) ||
          (j > 0 && !(cfg.divergence_times[j] > cfg.divergence_times[j - 1]))) {
        fail("divergence_times must be positive and increasing");
      }
    }
    if (cfg.divergence_steps < 10) fail("divergence_steps must be >= 10");
    return;
  }

  // Positive-phi experiments.
  if (cfg.beta) fail("beta applies only to the counterexample experiment (alpha/beta transposed?)");
  try {
    const auto phi = parse_phi(cfg.phi);
    if (!phi.assumption_ok()) {
      fail("phi '" + cfg.phi + "' violates the standing assumption: " + phi.report().reason);
    }
    if (cfg.experiment == Experiment::weak_agree && !cfg.driver_horizon && !phi.supremum()) {
      fail("phi is unbounded; weak-agree needs driver_T");
    }
  } catch (const InvalidArgument& e) {
    fail(std::string("phi: ") + e.what());
  }
  if (cfg.driver_horizon && !(*cfg.driver_horizon > 0.0)) fail("driver_T must be positive");
  if (cfg.cutoffs.empty()) fail("cutoffs must not be empty");
  for (std::size_t j = 0; j < cfg.cutoffs.size(); ++j) {
    if (!(cfg.cutoffs[j] > 0.0)) fail("cutoffs must be positive");
    if (j > 0 && !(cfg.cutoffs[j] < cfg.cutoffs[j - 1])) fail("cutoffs must be strictly decreasing");
  }
}

namespace {

// ---------------------------------------------------------------------------
// Experiment runners
// ---------------------------------------------------------------------------

StableParams driver_params(const ExperimentConfig& cfg) {
  return cfg.c ? StableParams(cfg.alpha, *cfg.c) : StableParams::normalized(cfg.alpha);
}

template <class Fn>
void write_file(const ExperimentConfig& cfg, const std::string& name, Fn&& fn) {
  std::ofstream out(cfg.output / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (cfg.output / name).string());
  fn(out);
}

class Outcome {
 public:
  void check(std::string name, double value, double threshold, bool pass, bool invariant) {
    result_.summary.push_back({std::move(name), value, threshold, pass});
    if (pass) return;
    if (invariant) {
      invariant_failed_ = true;
    } else {
      stat_failed_ = true;
    }
  }
  void failure(std::string message) { result_.failures.push_back(std::move(message)); }

  ExperimentResult finish() {
    result_.status = invariant_failed_ ? ExitStatus::invariant_violation
                     : stat_failed_    ? ExitStatus::statistical_failure
                                       : ExitStatus::pass;
    return std::move(result_);
  }

 private:
  ExperimentResult result_;
  bool invariant_failed_ = false;
  bool stat_failed_ = false;
};

std::string replicate_tag(std::size_t i, std::uint64_t seed) {
  return "replicate " + std::to_string(i) + ", seed " + std::to_string(seed);
}

ExperimentResult run_strong_construct(const ExperimentConfig& cfg) {
  const auto params = driver_params(cfg);
  const auto phi = parse_phi(cfg.phi);
  const double eps = cfg.cutoffs.back();
  const SolveOptions opts{cfg.overflow_guard};

  struct Rep {
    double terminal = 0.0;
    std::size_t events = 0;
    std::size_t replay = 0;
    bool deterministic = true;
    bool overflowed = false;
  };
  const auto reps = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t i) {
    const auto seed = derive_seed(cfg.seed, i, StreamTag::driver);
    Rng rng(seed);
    const auto path = sample_truncated_path(params, cfg.horizon, eps, rng);
    const auto sol = solve_truncated(phi, cfg.x0, path, opts);
    Rng again(seed);
    const auto path2 = sample_truncated_path(params, cfg.horizon, eps, again);
    const auto sol2 = solve_truncated(phi, cfg.x0, path2, opts);
    return Rep{sol.terminal(), path.size(), replay_mismatches(phi, path, sol),
               path == path2 && sol == sol2, sol.overflowed()};
  });

  {
    Rng rng(derive_seed(cfg.seed, 0, StreamTag::driver));
    const auto path = sample_truncated_path(params, cfg.horizon, eps, rng);
    write_file(cfg, "driver.csv", [&](std::ostream& o) { write_csv(o, path); });
    write_file(cfg, "solution.csv",
               [&](std::ostream& o) { write_csv(o, solve_truncated(phi, cfg.x0, path, opts)); });
  }
  write_file(cfg, "terminal.csv", [&](std::ostream& o) {
    o << "replicate,seed,events,x_T,overflowed\n";
    for (std::size_t i = 0; i < reps.size(); ++i) {
      csv::write_row(o, {std::to_string(i),
                         std::to_string(derive_seed(cfg.seed, i, StreamTag::driver)),
                         std::to_string(reps[i].events), csv::format_real(reps[i].terminal),
                         reps[i].overflowed ? "1" : "0"});
    }
  });

  Outcome out;
  std::size_t replay = 0;
  std::size_t nondeterministic = 0;
  std::size_t overflow = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto seed = derive_seed(cfg.seed, i, StreamTag::driver);
    if (reps[i].replay) out.failure("invariant violated: jump recursion replay (" + replicate_tag(i, seed) + ")");
    if (!reps[i].deterministic) out.failure("invariant violated: seeded re-simulation (" + replicate_tag(i, seed) + ")");
    replay += reps[i].replay;
    nondeterministic += reps[i].deterministic ? 0 : 1;
    overflow += reps[i].overflowed ? 1 : 0;
  }
  out.check("replay_mismatches", static_cast<double>(replay), 0.0, replay == 0, true);
  out.check("resimulation_mismatches", static_cast<double>(nondeterministic), 0.0,
            nondeterministic == 0, true);
  // Explosion is reported, not asserted against.
  out.check("overflow_guard_hits", static_cast<double>(overflow),
            static_cast<double>(cfg.replicates), true, false);
  return out.finish();
}

ExperimentResult run_ladder_monotone(const ExperimentConfig& cfg) {
  const auto params = driver_params(cfg);
  const auto phi = parse_phi(cfg.phi);
  const SolveOptions opts{cfg.overflow_guard};

  struct Rep {
    std::size_t violations = 0;
    std::size_t negative_increments = 0;
    std::vector<double> terminal;
  };
  const auto reps = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i, StreamTag::driver));
    const auto ladder = build_ladder(phi, cfg.x0, params, cfg.horizon, cfg.cutoffs, rng, opts);
    const auto limit = monotone_limit_estimate(ladder, cfg.horizon);
    Rep r;
    r.violations = ladder_violations(ladder);
    for (const double d : limit.differences) r.negative_increments += d < 0.0 ? 1 : 0;
    r.terminal = limit.values;
    return r;
  });

  {
    Rng rng(derive_seed(cfg.seed, 0, StreamTag::driver));
    const auto ladder = build_ladder(phi, cfg.x0, params, cfg.horizon, cfg.cutoffs, rng, opts);
    write_file(cfg, "ladder.csv", [&](std::ostream& o) { write_ladder_csv(o, ladder); });
  }
  write_file(cfg, "ladder_terminal.csv", [&](std::ostream& o) {
    o << "eps,median_x_T,mean_x_T\n";
    for (std::size_t j = 0; j < cfg.cutoffs.size(); ++j) {
      std::vector<double> xs;
      xs.reserve(reps.size());
      for (const auto& r : reps) xs.push_back(r.terminal[j]);
      csv::write_row(o, {csv::format_real(cfg.cutoffs[j]), csv::format_real(median(xs)),
                         csv::format_real(mean_variance(xs).mean)});
    }
  });

  Outcome out;
  std::size_t violations = 0;
  std::size_t negative = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].violations) {
      out.failure("invariant violated: finer level below coarser level (" +
                  replicate_tag(i, derive_seed(cfg.seed, i, StreamTag::driver)) + ")");
    }
    violations += reps[i].violations;
    negative += reps[i].negative_increments;
  }
  out.check("comparison_violations", static_cast<double>(violations), 0.0, violations == 0, true);
  out.check("negative_limit_increments", static_cast<double>(negative), 0.0, negative == 0, true);
  return out.finish();
}

ExperimentResult run_weak_agree(const ExperimentConfig& cfg) {
  const auto params = driver_params(cfg);
  const auto phi = parse_phi(cfg.phi);
  const double eps = cfg.cutoffs.back();
  const SolveOptions opts{cfg.overflow_guard};
  // τ_T <= T·sup φ^α, so this horizon always covers time T.
  const double driver_T = cfg.driver_horizon
                              ? *cfg.driver_horizon
                              : cfg.horizon * std::pow(*phi.supremum(), cfg.alpha) * 1.001;

  const auto truncated = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i, StreamTag::driver));
    return solve_truncated(phi, cfg.x0, sample_truncated_path(params, cfg.horizon, eps, rng), opts)
        .terminal();
  });

  struct Rep {
    std::optional<double> terminal;
    double residual = 0.0;
  };
  const auto changed = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i, StreamTag::secondary));
    const auto driver = sample_truncated_path(params, driver_T, eps, rng);
    const auto sol = solve_time_change(phi, cfg.x0, driver, cfg.alpha);
    return Rep{time_changed_value(sol, cfg.horizon),
               clock_roundtrip_residual(phi, cfg.x0, driver, cfg.alpha)};
  });

  {
    Rng rng(derive_seed(cfg.seed, 0, StreamTag::secondary));
    const auto driver = sample_truncated_path(params, driver_T, eps, rng);
    const auto sol = solve_time_change(phi, cfg.x0, driver, cfg.alpha);
    write_file(cfg, "clock.csv", [&](std::ostream& o) { write_csv(o, sol.clock); });
    write_file(cfg, "solution_time_change.csv", [&](std::ostream& o) { write_csv(o, sol.path); });
  }
  write_file(cfg, "marginals.csv", [&](std::ostream& o) {
    o << "construction,replicate,x\n";
    for (std::size_t i = 0; i < truncated.size(); ++i) {
      csv::write_row(o, {"truncation", std::to_string(i), csv::format_real(truncated[i])});
    }
    for (std::size_t i = 0; i < changed.size(); ++i) {
      if (changed[i].terminal) {
        csv::write_row(o, {"time-change", std::to_string(i), csv::format_real(*changed[i].terminal)});
      }
    }
  });

  Outcome out;
  std::vector<double> tc;
  double residual = 0.0;
  for (std::size_t i = 0; i < changed.size(); ++i) {
    if (changed[i].terminal) tc.push_back(*changed[i].terminal);
    if (changed[i].residual > cfg.roundtrip_tolerance) {
      out.failure("invariant violated: clock round trip (" +
                  replicate_tag(i, derive_seed(cfg.seed, i, StreamTag::secondary)) + ")");
    }
    residual = std::max(residual, changed[i].residual);
  }
  const double coverage = static_cast<double>(tc.size()) / static_cast<double>(cfg.replicates);
  out.check("max_clock_roundtrip_residual", residual, cfg.roundtrip_tolerance,
            residual <= cfg.roundtrip_tolerance, true);
  out.check("time_change_coverage", coverage, cfg.min_coverage, coverage >= cfg.min_coverage, false);
  if (tc.empty()) {
    out.failure("no time-change replicate reached time T");
    out.check("ks_p_value", 0.0, cfg.ks_p_threshold, false, false);
    return out.finish();
  }
  const auto ks = ks_two_sample(SampleSet(truncated, "truncation", cfg.seed),
                                SampleSet(std::move(tc), "time-change", cfg.seed));
  out.check("ks_statistic", ks.statistic, 1.0, true, false);
  out.check("ks_p_value", ks.p_value, cfg.ks_p_threshold, ks.p_value > cfg.ks_p_threshold, false);
  if (!(ks.p_value > cfg.ks_p_threshold)) {
    out.failure("statistical check failed: KS p = " + csv::format_real(ks.p_value) +
                " between constructions (master seed " + std::to_string(cfg.seed) + ")");
  }
  return out.finish();
}

ExperimentResult run_uniqueness_couple(const ExperimentConfig& cfg) {
  const auto params = driver_params(cfg);
  const auto phi = parse_phi(cfg.phi);
  const SolveOptions opts{cfg.overflow_guard};
  const auto& eps = cfg.cutoffs;

  struct Rep {
    std::vector<double> distance;
    std::size_t violations = 0;
  };
  const auto reps = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i, StreamTag::driver));
    const auto base = sample_truncated_path(params, cfg.horizon, eps.back() / 2.0, rng);
    Rep r;
    for (const double e : eps) {
      const auto coarse = solve_truncated(phi, cfg.x0, thin_path(base, e), opts);
      const auto fine = solve_truncated(phi, cfg.x0, thin_path(base, e / 2.0), opts);
      r.distance.push_back(sup_distance(coarse, fine));
      r.violations += dominance_violations(coarse, fine);
    }
    return r;
  });

  std::vector<double> medians;
  write_file(cfg, "coupling.csv", [&](std::ostream& o) {
    o << "eps,median_distance,mean_distance\n";
    for (std::size_t j = 0; j < eps.size(); ++j) {
      std::vector<double> d;
      d.reserve(reps.size());
      for (const auto& r : reps) d.push_back(r.distance[j]);
      medians.push_back(median(d));
      csv::write_row(o, {csv::format_real(eps[j]), csv::format_real(medians.back()),
                         csv::format_real(mean_variance(d).mean)});
    }
  });

  Outcome out;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].violations) {
      out.failure("invariant violated: finer level below coarser level (" +
                  replicate_tag(i, derive_seed(cfg.seed, i, StreamTag::driver)) + ")");
    }
    violations += reps[i].violations;
  }
  bool non_increasing = true;
  for (std::size_t j = 1; j < medians.size(); ++j) non_increasing &= medians[j] <= medians[j - 1];
  const double ratio = medians.front() > 0.0 ? medians.back() / medians.front()
                                             : std::numeric_limits<double>::infinity();
  out.check("coupled_dominance_violations", static_cast<double>(violations), 0.0, violations == 0,
            true);
  out.check("median_distance_non_increasing", non_increasing ? 1.0 : 0.0, 1.0, non_increasing,
            false);
  out.check("final_to_first_median_ratio", ratio, cfg.coupling_ratio_threshold,
            ratio < cfg.coupling_ratio_threshold, false);
  return out.finish();
}

ExperimentResult run_counterexample_suite(const ExperimentConfig& cfg) {
  const double alpha = cfg.alpha;
  const double beta = *cfg.beta;
  const auto sub = [&](std::uint64_t k) {
    return McOptions{derive_seed(cfg.seed, k, StreamTag::resample), cfg.threads};
  };

  const auto scaling = scaling_law_check(alpha, beta, cfg.t1, cfg.t2, cfg.replicates, cfg.grid_m, sub(0));
  const auto vlaw = v_law_check(alpha, beta, cfg.counterexample_horizon, cfg.v_law_replicates,
                                cfg.grid_m, sub(1));
  const auto demo = nonuniqueness_demo(alpha, beta, cfg.counterexample_horizon, cfg.replicates,
                                       cfg.grid_m, sub(2));
  const auto divergence = divergence_check(alpha, beta, cfg.divergence_times, cfg.divergence_level,
                                           cfg.replicates, cfg.divergence_steps, sub(3));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<CheckRow> rows{
      {"scaling_law", scaling.ks.statistic, scaling.ks.p_value, scaling.coverage, scaling.n, alpha,
       beta, cfg.grid_m, sub(0).seed},
      {"v_law", vlaw.ks.statistic, vlaw.ks.p_value, vlaw.coverage, vlaw.n, alpha, beta, cfg.grid_m,
       sub(1).seed},
      {"v_law_median_ratio", vlaw.median_ratio, nan, vlaw.coverage, vlaw.n, alpha, beta,
       cfg.grid_m, sub(1).seed},
      {"nonuniqueness_positive_fraction", demo.fraction_positive, nan, demo.coverage, demo.n,
       alpha, beta, cfg.grid_m, sub(2).seed},
      {"zero_solution_residual", demo.zero_residual, nan, demo.coverage, demo.n, alpha, beta,
       cfg.grid_m, sub(2).seed},
  };
  for (const auto& p : divergence.points) {
    rows.push_back({"divergence_t=" + csv::format_real(p.t), p.probability, nan, 1.0,
                    divergence.n, alpha, beta, cfg.divergence_steps, sub(3).seed});
  }
  write_file(cfg, "report.csv", [&](std::ostream& o) { write_report_csv(o, rows); });
  write_file(cfg, "divergence.csv", [&](std::ostream& o) {
    o << "t,probability,sigma\n";
    for (const auto& p : divergence.points) {
      csv::write_row(o, {csv::format_real(p.t), csv::format_real(p.probability),
                         csv::format_real(p.sigma)});
    }
  });

  Outcome out;
  out.check("scaling_exponent", scaling.exponent, 1.0 - beta, true, false);
  out.check("scaling_ks_p_value", scaling.ks.p_value, cfg.ks_p_threshold,
            scaling.ks.p_value > cfg.ks_p_threshold, false);
  out.check("v_law_coverage", vlaw.coverage, cfg.min_coverage,
            vlaw.coverage >= cfg.min_coverage && !vlaw.inconclusive, false);
  out.check("v_law_ks_p_value", vlaw.ks.p_value, cfg.ks_p_threshold,
            vlaw.ks.p_value > cfg.ks_p_threshold, false);
  out.check("zero_solution_residual", demo.zero_residual, 0.0, demo.zero_residual == 0.0, true);
  out.check("positive_fraction", demo.fraction_positive, cfg.positive_fraction_threshold,
            demo.fraction_positive >= cfg.positive_fraction_threshold, false);
  out.check("two_way_residual", demo.max_two_way_residual, cfg.roundtrip_tolerance,
            demo.max_two_way_residual <= cfg.roundtrip_tolerance, true);
  out.check("divergence_strictly_decreasing", divergence.strictly_decreasing ? 1.0 : 0.0, 1.0,
            divergence.strictly_decreasing, false);
  if (vlaw.inconclusive) out.failure("v-law check inconclusive: coverage below 50%; raise counterexample_T");
  return out.finish();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::filesystem::create_directories(cfg.output);
  ExperimentResult result;
  switch (cfg.experiment) {
    case Experiment::strong_construct: result = run_strong_construct(cfg); break;
    case Experiment::ladder_monotone: result = run_ladder_monotone(cfg); break;
    case Experiment::weak_agree: result = run_weak_agree(cfg); break;
    case Experiment::uniqueness_couple: result = run_uniqueness_couple(cfg); break;
    case Experiment::counterexample: result = run_counterexample_suite(cfg); break;
  }
  write_file(cfg, "summary.csv", [&](std::ostream& o) { write_summary_csv(o, result.summary); });
  return result;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "name,value,threshold,pass\n";
  for (const auto& r : rows) {
    csv::write_row(out, {r.name, csv::format_real(r.value), csv::format_real(r.threshold),
                         r.pass ? "true" : "false"});
  }
}

}  // namespace stable_sde
