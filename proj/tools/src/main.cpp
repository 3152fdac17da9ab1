#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "pmisc/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitEvaluation = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plateau-aware multi-index stochastic collocation experiments"};
  app.require_subcommand(1);

  std::string output_dir;
  std::uint64_t seed_override = 0;
  bool quiet = false;
  app.add_option("--output-dir", output_dir, "Directory receiving the CSV outputs");
  auto* seed_opt = app.add_option("--seed-override", seed_override, "Replace the model seed of the config");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  auto* run = app.add_subcommand("run", "Execute the run described by a YAML config");
  std::string config_path;
  run->add_option("config", config_path, "YAML config file")->required();

  auto* compare = app.add_subcommand("compare", "Align the error histories of two run directories");
  std::string dir_a;
  std::string dir_b;
  compare->add_option("dirA", dir_a)->required();
  compare->add_option("dirB", dir_b)->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    pmisc::ExperimentConfig config;
    try {
      config = pmisc::load_config(config_path);
    } catch (const pmisc::ConfigError& e) {
      std::cerr << config_path << ": " << e.what() << '\n';
      return kExitConfig;
    }
    pmisc::RunOptions options;
    if (!output_dir.empty()) options.output_dir = output_dir;
    if (*seed_opt) options.seed_override = seed_override;
    options.quiet = quiet;
    try {
      const auto summary = pmisc::run_experiment(config, options);
      if (!quiet) {
        std::cout << "status " << summary.status << ", cost " << summary.cost << ", l2 " << summary.final_l2
                  << ", output " << summary.output_dir.string() << '\n';
      }
    } catch (const std::exception& e) {
      std::cerr << "evaluation failed: " << e.what() << '\n';
      return kExitEvaluation;
    }
    return 0;
  }

  // compare
  const std::filesystem::path out =
      output_dir.empty() ? std::filesystem::path(dir_a) / "comparison.csv"
                         : std::filesystem::path(output_dir) / "comparison.csv";
  try {
    pmisc::compare_runs(dir_a, dir_b, out);
  } catch (const pmisc::InputError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "compare failed: " << e.what() << '\n';
    return kExitEvaluation;
  }
  if (!quiet) std::cout << "wrote " << out.string() << '\n';
  return 0;
}
