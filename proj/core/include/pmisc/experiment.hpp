#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmisc/adaptive.hpp"
#include "pmisc/metrics.hpp"

namespace pmisc {

/// Invalid configuration; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line) : std::runtime_error(format(what, line)), line_(line) {}
  int line() const { return line_; }

 private:
  static std::string format(const std::string& what, int line) {
    return line > 0 ? "line " + std::to_string(line) + ": " + what : what;
  }
  int line_;
};

/// Missing or malformed run directory contents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Problem { genz2dgp, parabolic1d };
enum class Algorithm { misc, plateau_misc, reference_sc, adaptive_sc_single_fidelity };

std::string_view to_string(Problem p);
std::string_view to_string(Algorithm a);

struct SnapshotSchedule {
  double first = 100.0;
  double growth = 2.0;
  std::vector<double> costs;  // explicit list overrides first/growth

  std::vector<double> thresholds(double max_cost) const;
};

struct ExperimentConfig {
  Problem problem = Problem::genz2dgp;
  Algorithm algorithm = Algorithm::plateau_misc;
  std::uint64_t seed = 1;
  KnotFamily family = KnotFamily::symmetric_leja;
  LevelToKnots rule = LevelToKnots::two_step;
  StoppingCriteria stopping;
  PlateauParams plateau;
  SnapshotSchedule snapshots;
  MetricConfig metrics;
  std::size_t pdf_grid = 201;
  std::size_t surface_grid = 101;
  int reference_level = 8;
  int reference_fidelity = 8;
  /// Smolyak level and fidelity of a reference_sc run.
  int sparse_grid_level = 2;
  int sparse_grid_fidelity = 8;
  int single_fidelity = 1;
  int max_fidelity = 8;
  int cells = 200;
  std::filesystem::path output_dir;
  std::filesystem::path cache_file;
};

/// Parses and validates a YAML config; unknown keys are rejected. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
};

struct RunSummary {
  std::filesystem::path output_dir;
  std::string status;
  double cost = 0.0;
  int iterations = 0;
  double final_l2 = 0.0;
  std::vector<MultiIndex> saturated;
};

/// Default output location when neither the config nor the options give one.
inline constexpr const char* kOutputRootEnv = "PMISC_OUTPUT_ROOT";

/// Executes a configured run and writes every CSV artefact into the output
/// directory. Evaluation failures propagate after partial outputs are flushed.
RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Aligns errors.csv of two run directories into `out_file`. Throws InputError.
void compare_runs(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b,
                  const std::filesystem::path& out_file);

}  // namespace pmisc
