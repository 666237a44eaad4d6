// stable-sde-lab run --config FILE [--seed S] [--out DIR] [--threads K]

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "stable_sde/error.hpp"
#include "stable_sde/harness.hpp"

namespace {

int code(stable_sde::ExitStatus s) { return static_cast<int>(s); }

}  // namespace

int main(int argc, char** argv) {
  using namespace stable_sde;

  CLI::App app{"Simulation lab for SDEs driven by stable subordinators"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  run->add_option("--config", config_path, "Experiment config (key = value)")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--threads", threads, "Override the worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitStatus::config_error);
  }

  try {
    auto cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.output = *out_dir;
    if (threads) cfg.threads = *threads;
    validate_config(cfg);

    const auto result = run_experiment(cfg);
    for (const auto& row : result.summary) {
      std::cout << row.name << " = " << row.value << (row.pass ? "  [ok]" : "  [FAIL]") << '\n';
    }
    for (const auto& f : result.failures) std::cerr << f << '\n';
    std::cout << to_string(cfg.experiment) << ": exit " << code(result.status) << '\n';
    return code(result.status);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return code(ExitStatus::config_error);
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return code(ExitStatus::config_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitStatus::invariant_violation);
  }
}
