#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "thirdq/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact NESS and relaxation solver for quadratic open fermionic chains"};
  app.require_subcommand(1);
  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment described by a JSON config");
  std::string config_path;
  std::optional<std::string> output_dir;
  int workers = 1;
  std::optional<long> seed;
  std::optional<std::string> format;
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--output-dir", output_dir, "Directory for result files (overrides output.directory)");
  run_cmd->add_option("--workers", workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Reserved; every computation is deterministic");
  run_cmd->add_option("--format", format, "Primary data format (overrides output.format)")->check(CLI::IsMember({"csv", "json"}));
  app.set_version_flag("--version", thirdq::experiment::kVersion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  using namespace thirdq::experiment;
  try {
    const ExperimentConfig config = load_config(config_path);
    RunOptions options;
    options.output_dir = output_dir;
    options.workers = workers;
    if (format) options.format = *format == "csv" ? Format::Csv : Format::Json;
    const RunResult result = run(config, options);
    std::cout << result.data_file << "\n" << result.summary_file << "\n" << result.metadata_file << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const thirdq::Error& e) {
    std::cerr << e.what() << "\n";
    return kNumericalFailure;
  }
}
