#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmisc/experiment.hpp"

using namespace pmisc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("pmisc_experiment_test_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmallMetrics = R"(
metrics:
  samples: 500
  ks_samples: 500
  pdf_grid: 21
  surface_grid: 11
reference:
  level: 5
)";

}  // namespace

TEST_CASE("config parsing and defaults") {
  const auto c = parse_config("problem: parabolic1d\nalgorithm: misc\nstopping:\n  max_cost: 1.0e4\n");
  CHECK(c.problem == Problem::parabolic1d);
  CHECK(c.algorithm == Algorithm::misc);
  CHECK(c.stopping.max_cost == 1e4);
  CHECK(c.reference_level == 6);
  CHECK(c.reference_fidelity == 6);
  CHECK(c.plateau.burn_in == 2);
  CHECK(c.plateau.min_length == 3);
  CHECK(c.plateau.max_slope == 0.1);
  const auto g = parse_config("problem: genz2dgp\nalgorithm: plateau_misc\nstopping: {max_iterations: 5}\n");
  CHECK(g.reference_level == 8);
  CHECK(g.stopping.max_iterations == 5);
  CHECK(g.family == KnotFamily::symmetric_leja);
  CHECK(g.rule == LevelToKnots::two_step);
}

TEST_CASE("config errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("problem: genz2dgp\nalgorithm: misc\nstopping:\n  max_cost: 10\n  max_cots: 3\n") == 5);
  CHECK(line_of("problem: genz2dgp\nalgorithm: mics\nstopping: {max_cost: 1}\n") == 2);
  CHECK(line_of("problem: genz2dgp\nalgorithm: misc\nstopping:\n  max_cost: lots\n") == 4);
  CHECK(line_of("problem: genz2dgp\nalgorithm: misc\nstopping: {max_cost: 1}\ncollocation:\n  family: gauss\n") == 5);
  CHECK(line_of("problem: genz2dgp\nalgorithm: misc\n") == 0);
  CHECK(line_of("problem: [unclosed\n") > 0);
  CHECK_THROWS_AS(parse_config("problem: genz2dgp\nalgorithm: misc\nstopping: {max_cost: 1}\nextra: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("problem: genz2dgp\nalgorithm: misc\nstopping: {max_cost: 1}\n"
                               "plateau: {max_slope: 0}\n"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("reference sparse grid run writes the level-2 combination") {
  auto c = parse_config(std::string("problem: genz2dgp\nalgorithm: reference_sc\nsparse_grid: {level: 2}\n") +
                        kSmallMetrics);
  const auto dir = scratch("ref");
  RunOptions o;
  o.output_dir = dir;
  o.quiet = true;
  const auto s = run_experiment(c, o);
  CHECK(s.status == "complete");
  CHECK(s.cost == doctest::Approx(13 * 1e8));
  const auto rows = read_csv(dir / "miset.csv");
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"index", "b1", "b2", "coeff", "in_set"});
  int nonzero = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) nonzero += rows[i][3] != "0";
  CHECK(nonzero == 5);
  for (const char* f : {"errors.csv", "pdf.csv", "surface.csv", "summary.csv", "envelope_8.csv", "coeffs_8.csv",
                        "plateau_8.csv", "history.csv", "snapshots/miset_1.csv"}) {
    CHECK(fs::exists(dir / f));
  }
  CHECK(read_csv(dir / "surface.csv").size() == 1 + 11 * 11);
  CHECK(read_csv(dir / "pdf.csv").size() == 1 + 21);
  fs::remove_all(dir);
}

TEST_CASE("reruns are bit-identical and compare to themselves with unit ratios") {
  const auto c = parse_config(std::string("problem: genz2dgp\nalgorithm: plateau_misc\nseed: 4\n"
                                          "stopping: {max_cost: 3000}\nsnapshots: {first: 200, growth: 2}\n") +
                              kSmallMetrics);
  const auto a = scratch("a");
  const auto b = scratch("b");
  RunOptions o;
  o.quiet = true;
  o.output_dir = a;
  run_experiment(c, o);
  o.output_dir = b;
  run_experiment(c, o);
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    CAPTURE(rel.string());
    CHECK(slurp(entry.path()) == slurp(b / rel));
  }
  const auto out = a / "comparison.csv";
  compare_runs(a, b, out);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() > 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][4] == "1");
    CHECK(rows[i][7] == "1");
    CHECK(rows[i][10] == "1");
  }
  CHECK(slurp(out).rfind("# alignment", 0) == 0);

  o.output_dir = b;
  o.seed_override = 5;
  run_experiment(c, o);
  CHECK(slurp(a / "history.csv") != slurp(b / "history.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("comparison aligns to the nearest preceding snapshot") {
  const auto a = scratch("ca");
  const auto b = scratch("cb");
  fs::create_directories(a);
  fs::create_directories(b);
  std::ofstream(a / "errors.csv") << "snapshot_cost,l2,h1,ks2\n100,1,1,1\n250,0.5,0.5,0.5\n";
  std::ofstream(b / "errors.csv") << "snapshot_cost,l2,h1,ks2\n120,2,2,2\n200,0.25,1,0\n";
  compare_runs(a, b, a / "c.csv");
  const auto rows = read_csv(a / "c.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "250");
  CHECK(rows[1][1] == "200");
  CHECK(rows[1][4] == "2");
  CHECK(rows[1][7] == "0.5");
  CHECK(rows[1][10] == "inf");
  CHECK_THROWS_AS(compare_runs(a, scratch("missing"), a / "d.csv"), InputError);
  fs::remove_all(a);
  fs::remove_all(b);
}
