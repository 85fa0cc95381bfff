// unipred: run bound-verification experiments from a config file.
//
//   unipred run <config> [--out report.csv] [--seed S] [--trials T] [--quiet]
//   unipred verify-inequality [--samples 100000] [--max-n 8] [--seed S]
//   unipred enumerate <config> [--out table.csv]
//
// Exit status: 0 when every verdict is PASS (or NOT-APPLICABLE), 1 when some
// check fails, 2 on invalid input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "unipred/errors.hpp"
#include "unipred/harness.hpp"

namespace {

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

const std::string& config_path(const std::string& path) {
  if (path.empty()) throw unipred::ConfigError({"config: no config file given"});
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal sequence prediction: bound verification harness"};
  app.require_subcommand(1);

  std::string out_path;
  bool quiet = false;

  auto* run_cmd = app.add_subcommand("run", "run an experiment and write the bound report CSV");
  std::string run_config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  run_cmd->add_option("config,--config", run_config, "experiment config (YAML)");
  run_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
  run_cmd->add_option("--seed", seed, "override the config seed");
  run_cmd->add_option("--trials", trials, "override the config trial count");
  run_cmd->add_flag("--quiet", quiet, "suppress the verdict summary on stderr");

  auto* ineq_cmd = app.add_subcommand("verify-inequality",
                                      "randomized check of sum (y-z)^2 <= sum y ln(y/z)");
  std::size_t samples = 100000;
  std::size_t max_n = 8;
  std::uint64_t ineq_seed = 0;
  ineq_cmd->add_option("--samples", samples, "pairs per alphabet size")->check(CLI::PositiveNumber);
  ineq_cmd->add_option("--max-n", max_n, "largest alphabet size")->check(CLI::Range(2, 64));
  ineq_cmd->add_option("--seed", ineq_seed, "generator seed");
  ineq_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
  ineq_cmd->add_flag("--quiet", quiet, "suppress the verdict line on stderr");

  auto* enum_cmd = app.add_subcommand("enumerate", "dump the exact per-prefix table of a config");
  std::string enum_config;
  enum_cmd->add_option("config,--config", enum_config, "experiment config (YAML)");
  enum_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
  enum_cmd->add_flag("--quiet", quiet, "no effect; accepted for symmetry");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto config = unipred::load_config(config_path(run_config));
      if (seed) config.seed = *seed;
      if (trials) config.trials = *trials;
      const auto report = unipred::run(config);
      write_output(out_path, report.to_csv());
      if (!quiet) {
        for (const auto& r : report.summary) {
          std::cerr << r.quantity << ": " << unipred::to_string(r.verdict) << '\n';
        }
      }
      return report.all_pass() ? 0 : 1;
    }
    if (ineq_cmd->parsed()) {
      const auto report = unipred::verify_inequality_suite(samples, max_n, ineq_seed);
      write_output(out_path, report.to_csv());
      if (!quiet) {
        std::cerr << "violations: " << report.violations << " of " << report.total << " ("
                  << (report.passed() ? "PASS" : "FAIL") << ")\n";
      }
      return report.passed() ? 0 : 1;
    }
    if (enum_cmd->parsed()) {
      const auto config = unipred::load_config(config_path(enum_config));
      write_output(out_path, unipred::steps_to_csv(unipred::enumerate_steps(config)));
      return 0;
    }
  } catch (const unipred::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
