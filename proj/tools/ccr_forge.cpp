// ccr-forge: experiment driver for the confined time-operator library.
//
// Subcommands:
//   run <config.json> [--out DIR] [--strict]   execute one experiment
//   validate <config.json>                     schema check only (always strict)
//   version                                    print the artifact version
//
// Exit codes: 0 success, 2 config/validation failure, 1 numerical-assertion
// failure (a measured residual violated the configured bound).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "ccrforge/experiment_config.hpp"
#include "ccrforge/experiments.hpp"
#include "ccrforge/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ccrforge::cli::ConfigError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ccrforge::cli::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

int do_run(const std::string& config_path, const std::string& out_dir, bool strict) {
  std::vector<std::string> warnings;
  ccrforge::cli::ExperimentConfig cfg;
  try {
    const nlohmann::json doc = load_json(config_path);
    cfg = ccrforge::cli::parse_experiment_config(doc, strict, warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    ccrforge::cli::validate_experiment_config(cfg);
  } catch (const ccrforge::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    ccrforge::cli::RunOutput out = ccrforge::cli::run_experiment(cfg);
    const auto t1 = std::chrono::steady_clock::now();

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", ccrforge::cli::serialize_report(out.report));
    for (const auto& [name, bytes] : out.csv_files) write_file(dir / name, bytes);

    const double seconds = std::chrono::duration<double>(t1 - t0).count();
    std::cout << ccrforge::cli::experiment_name(cfg.experiment) << ": wrote report.json";
    for (const auto& [name, bytes] : out.csv_files) {
      (void)bytes;
      std::cout << ", " << name;
    }
    // Wall time goes to the console only; reports stay byte-reproducible.
    std::cout << " (" << seconds << " s)\n";

    if (out.assertion_failed) {
      std::cerr << "assertion failed: " << out.assertion_message << "\n";
      return kExitAssertion;
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    // Setup-stage precondition (degenerate spectrum, bad domain request).
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

int do_validate(const std::string& config_path) {
  std::vector<std::string> warnings;
  try {
    const nlohmann::json doc = load_json(config_path);
    const ccrforge::cli::ExperimentConfig cfg =
        ccrforge::cli::parse_experiment_config(doc, /*strict=*/true, warnings);
    ccrforge::cli::validate_experiment_config(cfg);
    std::cout << "valid: " << ccrforge::cli::experiment_name(cfg.experiment) << " on K = "
              << cfg.system.K << ", gamma = " << cfg.system.gamma << "\n";
    return kExitOk;
  } catch (const ccrforge::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confined time-operator experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool strict = false;

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory (default: current)");
  run->add_flag("--strict", strict, "reject unknown config keys");

  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", config_path, "experiment config (JSON)")->required();

  CLI::App* version = app.add_subcommand("version", "print the artifact version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (version->parsed()) {
    std::cout << "ccr-forge " << ccrforge::version_string << "\n";
    return kExitOk;
  }
  if (validate->parsed()) return do_validate(config_path);
  return do_run(config_path, out_dir, strict);
}
