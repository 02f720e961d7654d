#include "gibbslab/config.hpp"
#include "gibbslab/data_model.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int report_error(const gibbslab::Error& e) {
  std::cerr << "error: " << e.what() << '\n';
  switch (e.category()) {
    case gibbslab::ErrorCategory::configuration: return kExitConfig;
    case gibbslab::ErrorCategory::argument:
    case gibbslab::ErrorCategory::numerical: return kExitNumerical;
  }
  return kExitNumerical;
}

int run(const std::string& path, const std::optional<std::string>& out, std::optional<std::size_t> workers,
        std::optional<std::uint64_t> seed, const std::vector<std::string>& theorems) {
  gibbslab::ExperimentConfig config = gibbslab::load_config(path);
  if (workers) config.workers = *workers;
  if (seed) config.master_seed = *seed;
  if (!theorems.empty()) {
    const auto& known = gibbslab::theorem_names();
    std::vector<std::string> issues;
    for (const auto& t : theorems) {
      if (std::find(known.begin(), known.end(), t) == known.end()) issues.push_back("--theorem: unknown '" + t + "'");
    }
    if (!issues.empty()) throw gibbslab::ConfigError(issues);
    config.theorems = theorems;
  }
  const gibbslab::RunOutcome outcome = gibbslab::run_experiment(config, out);
  std::size_t asserted = 0;
  std::size_t failed = 0;
  for (const auto& r : outcome.rows) {
    if (!r.asserted) continue;
    ++asserted;
    if (!r.pass) {
      ++failed;
      std::cout << "FAIL " << r.theorem << ' ' << r.point << " margin=" << gibbslab::format_number(*r.margin, 6)
                << '\n';
    }
  }
  std::cout << outcome.rows.size() << " rows, " << asserted << " asserted, " << failed << " failed\n"
            << "wrote " << outcome.directory.string() << '\n';
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs-ERM bound-versus-oracle experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> theorems;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment and write a report directory");
  run_cmd->add_option("config", config_path, "Configuration file")->required();
  run_cmd->add_option("--out", out, "Output directory (default: config, then $" + std::string(gibbslab::kOutputEnv) + ")");
  run_cmd->add_option("--workers", workers, "Concurrent sweep points")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Override master_seed");
  run_cmd->add_option("--theorem", theorems, "Restrict to these theorems");

  std::string validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a configuration file");
  validate_cmd->add_option("config", validate_path, "Configuration file")->required();

  CLI::App* list_cmd = app.add_subcommand("list-landscapes", "List built-in landscapes and data models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return run(config_path, out, workers, seed, theorems);
    if (*validate_cmd) {
      const gibbslab::ExperimentConfig config = gibbslab::load_config(validate_path);
      std::cout << gibbslab::to_json(config).dump(2) << '\n';
      return 0;
    }
    if (*list_cmd) {
      for (const auto& name : gibbslab::landscape_names()) std::cout << "landscape  " << name << '\n';
      for (const auto& name : gibbslab::data_model_names()) std::cout << "data_model " << name << '\n';
      return 0;
    }
  } catch (const gibbslab::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const gibbslab::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
