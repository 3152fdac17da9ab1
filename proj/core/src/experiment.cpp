#include "pmisc/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "pmisc/csv.hpp"
#include "pmisc/random.hpp"

namespace pmisc {

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::genz2dgp: return "genz2dgp";
    case Problem::parabolic1d: return "parabolic1d";
  }
  return "?";
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::misc: return "misc";
    case Algorithm::plateau_misc: return "plateau_misc";
    case Algorithm::reference_sc: return "reference_sc";
    case Algorithm::adaptive_sc_single_fidelity: return "adaptive_sc_single_fidelity";
  }
  return "?";
}

std::vector<double> SnapshotSchedule::thresholds(double max_cost) const {
  if (!costs.empty()) return costs;
  std::vector<double> out;
  if (!std::isfinite(max_cost)) max_cost = 1e12;
  for (double c = first; c <= max_cost; c *= growth) out.push_back(c);
  return out;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

int line_of(const YAML::Node& n) {
  const auto mark = n.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!map.IsMap()) throw ConfigError("'" + where + "' must be a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where, line_of(kv.first));
    }
  }
}

template <typename T>
T read(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for '" + key + "'", line_of(n));
  }
}

template <typename T>
void read_opt(const YAML::Node& map, const char* key, T& out, const std::string& prefix = {}) {
  if (const auto n = map[key]; n) out = read<T>(n, prefix + key);
}

void require(bool ok, const std::string& what, const YAML::Node& n) {
  if (!ok) throw ConfigError(what, line_of(n));
}

ExperimentConfig parse_root(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigError("empty config", 0);
  check_keys(root,
             {"problem", "algorithm", "seed", "collocation", "stopping", "plateau", "snapshots", "metrics",
              "reference", "sparse_grid", "problem_options", "single_fidelity", "output_dir", "cache_file"},
             "config");
  ExperimentConfig c;
  if (const auto n = root["problem"]) {
    const auto v = read<std::string>(n, "problem");
    if (v == "genz2dgp") {
      c.problem = Problem::genz2dgp;
    } else if (v == "parabolic1d") {
      c.problem = Problem::parabolic1d;
    } else {
      throw ConfigError("unknown problem '" + v + "'", line_of(n));
    }
  } else {
    throw ConfigError("missing key 'problem'", line_of(root));
  }
  if (const auto n = root["algorithm"]) {
    const auto v = read<std::string>(n, "algorithm");
    if (v == "misc") {
      c.algorithm = Algorithm::misc;
    } else if (v == "plateau_misc") {
      c.algorithm = Algorithm::plateau_misc;
    } else if (v == "reference_sc") {
      c.algorithm = Algorithm::reference_sc;
    } else if (v == "adaptive_sc_single_fidelity") {
      c.algorithm = Algorithm::adaptive_sc_single_fidelity;
    } else {
      throw ConfigError("unknown algorithm '" + v + "'", line_of(n));
    }
  } else {
    throw ConfigError("missing key 'algorithm'", line_of(root));
  }
  const bool parabolic = c.problem == Problem::parabolic1d;
  c.max_fidelity = parabolic ? Parabolic1dNoisy::kMaxFidelity : 8;
  c.reference_level = parabolic ? 6 : 8;
  c.reference_fidelity = parabolic ? Parabolic1dNoisy::kMaxFidelity : 8;
  c.sparse_grid_fidelity = c.reference_fidelity;

  read_opt(root, "seed", c.seed);

  if (const auto n = root["collocation"]) {
    check_keys(n, {"family", "rule"}, "collocation");
    try {
      if (n["family"]) c.family = parse_knot_family(read<std::string>(n["family"], "collocation.family"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(n["family"]));
    }
    try {
      if (n["rule"]) c.rule = parse_level_to_knots(read<std::string>(n["rule"], "collocation.rule"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(n["rule"]));
    }
  }

  if (const auto n = root["stopping"]) {
    check_keys(n, {"max_cost", "max_iterations", "min_profit"}, "stopping");
    read_opt(n, "max_cost", c.stopping.max_cost, "stopping.");
    read_opt(n, "max_iterations", c.stopping.max_iterations, "stopping.");
    read_opt(n, "min_profit", c.stopping.min_profit, "stopping.");
    require(c.stopping.max_cost > 0.0, "stopping.max_cost must be > 0", n);
    require(c.stopping.min_profit >= 0.0, "stopping.min_profit must be >= 0", n);
  }
  if (c.algorithm != Algorithm::reference_sc && !c.stopping.any_finite()) {
    throw ConfigError("at least one stopping criterion must be finite", root["stopping"] ? line_of(root["stopping"]) : 0);
  }

  if (const auto n = root["plateau"]) {
    check_keys(n, {"burn_in", "burn_out", "min_length", "max_slope"}, "plateau");
    read_opt(n, "burn_in", c.plateau.burn_in, "plateau.");
    read_opt(n, "burn_out", c.plateau.burn_out, "plateau.");
    read_opt(n, "min_length", c.plateau.min_length, "plateau.");
    read_opt(n, "max_slope", c.plateau.max_slope, "plateau.");
    try {
      c.plateau.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(n));
    }
  }

  if (const auto n = root["snapshots"]) {
    check_keys(n, {"first", "growth", "costs"}, "snapshots");
    read_opt(n, "first", c.snapshots.first, "snapshots.");
    read_opt(n, "growth", c.snapshots.growth, "snapshots.");
    read_opt(n, "costs", c.snapshots.costs, "snapshots.");
    require(c.snapshots.first > 0.0, "snapshots.first must be > 0", n);
    require(c.snapshots.growth > 1.0, "snapshots.growth must be > 1", n);
    require(std::is_sorted(c.snapshots.costs.begin(), c.snapshots.costs.end()) &&
                std::all_of(c.snapshots.costs.begin(), c.snapshots.costs.end(), [](double v) { return v > 0; }),
            "snapshots.costs must be positive and increasing", n);
  }

  if (const auto n = root["metrics"]) {
    check_keys(n, {"samples", "ks_samples", "seed", "fd_step", "pdf_grid", "surface_grid"}, "metrics");
    read_opt(n, "samples", c.metrics.samples, "metrics.");
    read_opt(n, "ks_samples", c.metrics.ks_samples, "metrics.");
    read_opt(n, "seed", c.metrics.seed, "metrics.");
    read_opt(n, "fd_step", c.metrics.fd_step, "metrics.");
    read_opt(n, "pdf_grid", c.pdf_grid, "metrics.");
    read_opt(n, "surface_grid", c.surface_grid, "metrics.");
    try {
      c.metrics.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(n));
    }
    require(c.pdf_grid >= 2, "metrics.pdf_grid must be >= 2", n);
    require(c.surface_grid >= 2, "metrics.surface_grid must be >= 2", n);
  }

  if (const auto n = root["problem_options"]) {
    check_keys(n, {"max_fidelity", "cells"}, "problem_options");
    read_opt(n, "max_fidelity", c.max_fidelity, "problem_options.");
    read_opt(n, "cells", c.cells, "problem_options.");
    require(c.max_fidelity >= 1, "problem_options.max_fidelity must be >= 1", n);
    require(!parabolic || c.max_fidelity == Parabolic1dNoisy::kMaxFidelity,
            "problem_options.max_fidelity is fixed at 6 for parabolic1d", n);
    require(c.cells >= 10, "problem_options.cells must be >= 10", n);
  }
  const int fidelity_cap = parabolic ? Parabolic1dNoisy::kMaxFidelity : 64;

  if (const auto n = root["reference"]) {
    check_keys(n, {"level", "fidelity"}, "reference");
    read_opt(n, "level", c.reference_level, "reference.");
    read_opt(n, "fidelity", c.reference_fidelity, "reference.");
    require(c.reference_level >= 0, "reference.level must be >= 0", n);
    require(c.reference_fidelity >= 1 && c.reference_fidelity <= fidelity_cap, "reference.fidelity out of range", n);
  }
  if (const auto n = root["sparse_grid"]) {
    check_keys(n, {"level", "fidelity"}, "sparse_grid");
    read_opt(n, "level", c.sparse_grid_level, "sparse_grid.");
    read_opt(n, "fidelity", c.sparse_grid_fidelity, "sparse_grid.");
    require(c.sparse_grid_level >= 0, "sparse_grid.level must be >= 0", n);
    require(c.sparse_grid_fidelity >= 1 && c.sparse_grid_fidelity <= fidelity_cap,
            "sparse_grid.fidelity out of range", n);
  }
  if (const auto n = root["single_fidelity"]) {
    c.single_fidelity = read<int>(n, "single_fidelity");
    require(c.single_fidelity >= 1 && c.single_fidelity <= c.max_fidelity, "single_fidelity out of range", n);
  }
  if (const auto n = root["output_dir"]) c.output_dir = read<std::string>(n, "output_dir");
  if (const auto n = root["cache_file"]) c.cache_file = read<std::string>(n, "cache_file");
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  return parse_root(root);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string(), 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Runs

namespace {

std::unique_ptr<ModelHierarchy> make_model(const ExperimentConfig& c, std::uint64_t seed) {
  switch (c.problem) {
    case Problem::genz2dgp: return std::make_unique<Genz2dgpNoisy>(seed, c.max_fidelity);
    case Problem::parabolic1d: {
      ParabolicOptions opts;
      opts.cells = c.cells;
      return std::make_unique<Parabolic1dNoisy>(opts);
    }
  }
  throw std::logic_error("unknown problem");
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::string join_indices(const std::vector<MultiIndex>& v) {
  std::string s;
  for (const auto& m : v) {
    if (!s.empty()) s += ' ';
    s += m.to_string();
  }
  return s;
}

void write_miset_csv(std::ostream& os, const Surrogate& s, const MultiIndexSet& adapt_set, std::size_t n_model) {
  CsvWriter csv(os);
  std::vector<std::string> cols{"index"};
  for (std::size_t j = 1; j <= n_model; ++j) cols.push_back("a" + std::to_string(j));
  for (std::size_t j = 1; j <= s.n_param(); ++j) cols.push_back("b" + std::to_string(j));
  cols.emplace_back("coeff");
  cols.emplace_back("in_set");
  csv.header(cols);
  const auto coeffs = combination_coeffs(s.set());
  for (const auto& g : s.set()) {
    std::vector<std::string> cells{g.to_string()};
    for (int v : g.entries()) cells.push_back(std::to_string(v));
    const auto it = coeffs.find(g);
    cells.push_back(std::to_string(it == coeffs.end() ? 0 : it->second));
    cells.emplace_back(adapt_set.contains(g) ? "1" : "0");
    csv.row_cells(cells);
  }
}

class RunWriter {
 public:
  RunWriter(const ExperimentConfig& c, const std::filesystem::path& dir, const ModelHierarchy& model, bool quiet)
      : cfg_(c), dir_(dir), quiet_(quiet) {
    std::filesystem::create_directories(dir_ / "snapshots");
    const std::size_t n = model.parameter_dims();
    const auto t0 = rng::splitmix64(c.metrics.seed);
    pts_ = mc_points(c.metrics.samples, n, c.metrics.seed);
    stencil_ = fd_stencil(pts_, c.metrics.fd_step);
    ks_pts_ = mc_points(c.metrics.ks_samples, n, t0);
    reference_ = build_reference(model, c.reference_level, MultiIndex{c.reference_fidelity});
    ref_vals_ = reference_.evaluate_many(pts_);
    ref_stencil_ = reference_.evaluate_many(stencil_);
    ref_ks_ = reference_.evaluate_many(ks_pts_);
    errors_ = open_out(dir_ / "errors.csv");
    CsvWriter(errors_).header({"snapshot_cost", "l2", "h1", "ks2"});
    errors_.flush();
  }

  void open_history(const std::vector<MultiIndex>& fidelities) {
    fidelities_ = fidelities;
    history_ = open_out(dir_ / "history.csv");
    std::vector<std::string> cols{"iteration", "selected_index", "backfill", "E", "W", "profit", "cumulative_cost"};
    for (const auto& a : fidelities_) cols.push_back("n_" + a.to_string());
    cols.emplace_back("saturated_fidelities");
    CsvWriter(history_).header(cols);
    history_.flush();
  }

  /// `label` maps the store's fidelity key to the fidelity named in outputs.
  void iteration(const IterationRecord& r, const MultiIndex& label) {
    std::vector<std::string> cells{std::to_string(r.iteration), r.selected.to_string(), join_indices(r.backfill),
                                   format_real(r.error),        format_real(r.work),     format_real(r.profit),
                                   format_real(r.cumulative_cost)};
    for (const auto& a : fidelities_) {
      auto it = r.points.find(a);
      if (it == r.points.end() && a == label) it = r.points.find(MultiIndex{});
      cells.push_back(std::to_string(it == r.points.end() ? 0 : it->second));
    }
    cells.push_back(join_indices(r.saturated));
    CsvWriter(history_).row_cells(cells);
    history_.flush();
  }

  void snapshot(const Surrogate& s, const MultiIndexSet& set, double cost, std::size_t n_model) {
    ++count_;
    const double l2 = l2_from_values(s.evaluate_many(pts_), ref_vals_);
    const double h1 = h1_from_values(s.evaluate_many(stencil_), ref_stencil_, s.n_param(), cfg_.metrics.fd_step);
    const double ks = ks2(s.evaluate_many(ks_pts_), ref_ks_);
    CsvWriter(errors_).row(cost, l2, h1, ks);
    errors_.flush();
    auto os = open_out(dir_ / "snapshots" / ("miset_" + std::to_string(count_) + ".csv"));
    write_miset_csv(os, s, set, n_model);
    last_l2_ = l2;
    if (!quiet_) std::cerr << "snapshot " << count_ << ": cost " << cost << ", l2 " << l2 << '\n';
  }

  void finish(const Surrogate& s, const MultiIndexSet& set, std::size_t n_model) {
    {
      auto os = open_out(dir_ / "miset.csv");
      write_miset_csv(os, s, set, n_model);
    }
    if (s.n_param() == 2) {
      auto os = open_out(dir_ / "surface.csv");
      write_surface_csv(os, s, cfg_.surface_grid);
    }
    const auto vals = s.evaluate_many(pts_);
    const auto [lo_s, hi_s] = std::minmax_element(vals.begin(), vals.end());
    const auto [lo_r, hi_r] = std::minmax_element(ref_vals_.begin(), ref_vals_.end());
    double lo = std::min(*lo_s, *lo_r);
    double hi = std::max(*hi_s, *hi_r);
    const double pad = 0.1 * std::max(hi - lo, 1e-12);
    lo -= pad;
    hi += pad;
    std::vector<double> grid(cfg_.pdf_grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }
    const auto ds = kde_pdf(vals, grid);
    const auto dr = kde_pdf(ref_vals_, grid);
    auto os = open_out(dir_ / "pdf.csv");
    CsvWriter csv(os);
    csv.header({"grid", "surrogate", "reference"});
    for (std::size_t i = 0; i < grid.size(); ++i) csv.row(grid[i], ds[i], dr[i]);
  }

  void spectra(const std::map<MultiIndex, FidelitySpectrum>& fs, const MultiIndex& label,
               const std::map<MultiIndex, std::vector<PlateauRecord>>& history, int final_iteration) {
    for (const auto& [alpha, f] : fs) {
      const MultiIndex name = alpha.empty() ? label : alpha;
      const std::string tag = name.to_string();
      {
        auto os = open_out(dir_ / ("envelope_" + tag + ".csv"));
        write_envelope_csv(os, f.envelope);
      }
      {
        auto os = open_out(dir_ / ("coeffs_" + tag + ".csv"));
        write_coeffs_csv(os, f.expansion, f.restricted.n_param());
      }
      auto os = open_out(dir_ / ("plateau_" + tag + ".csv"));
      if (auto it = history.find(alpha); it != history.end()) {
        write_plateau_csv(os, it->second);
      } else {
        const PlateauRecord rec{final_iteration, f.report};
        write_plateau_csv(os, std::span<const PlateauRecord>(&rec, 1));
      }
    }
  }

  void summary(const RunSummary& s, const ExperimentConfig& c, std::uint64_t seed) {
    auto os = open_out(dir_ / "summary.csv");
    CsvWriter csv(os);
    csv.header({"key", "value"});
    csv.row(std::string("problem"), std::string(to_string(c.problem)));
    csv.row(std::string("algorithm"), std::string(to_string(c.algorithm)));
    csv.row(std::string("seed"), std::to_string(seed));
    csv.row(std::string("status"), s.status);
    csv.row(std::string("cost"), format_real(s.cost));
    csv.row(std::string("iterations"), std::to_string(s.iterations));
    csv.row(std::string("final_l2"), format_real(s.final_l2));
    csv.row(std::string("saturated"), join_indices(s.saturated));
  }

  double last_l2() const { return last_l2_; }

 private:
  const ExperimentConfig& cfg_;
  std::filesystem::path dir_;
  bool quiet_;
  Points pts_;
  Points stencil_;
  Points ks_pts_;
  Surrogate reference_;
  std::vector<double> ref_vals_;
  std::vector<double> ref_stencil_;
  std::vector<double> ref_ks_;
  std::ofstream errors_;
  std::ofstream history_;
  std::vector<MultiIndex> fidelities_;
  int count_ = 0;
  double last_l2_ = 0.0;
};

std::filesystem::path resolve_output(const ExperimentConfig& c, const RunOptions& o, std::uint64_t seed) {
  if (o.output_dir) return *o.output_dir;
  if (!c.output_dir.empty()) return c.output_dir;
  std::filesystem::path root = ".";
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) root = env;
  return root / (std::string(to_string(c.problem)) + "_" + std::string(to_string(c.algorithm)) + "_s" +
                 std::to_string(seed));
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& c, const RunOptions& options) {
  const std::uint64_t seed = options.seed_override.value_or(c.seed);
  RunSummary summary;
  summary.output_dir = resolve_output(c, options, seed);
  const auto model = make_model(c, seed);
  RunWriter out(c, summary.output_dir, *model, options.quiet);

  std::unique_ptr<EvalCache> cache =
      c.cache_file.empty() ? std::make_unique<EvalCache>() : std::make_unique<EvalCache>(c.cache_file);
  if (cache->degraded() && !options.quiet) std::cerr << "warning: " << cache->warning() << '\n';

  const bool single = c.algorithm == Algorithm::reference_sc || c.algorithm == Algorithm::adaptive_sc_single_fidelity;
  const int fixed_level = c.algorithm == Algorithm::reference_sc ? c.sparse_grid_fidelity : c.single_fidelity;
  const MultiIndex label = single ? MultiIndex{fixed_level} : MultiIndex{};
  std::unique_ptr<ModelHierarchy> fixed;
  if (single) fixed = std::make_unique<FixedFidelity>(*model, label);
  const ModelHierarchy& target = single ? *fixed : *model;

  const bool reference_run = c.algorithm == Algorithm::reference_sc;
  const auto nodes = reference_run
                         ? std::make_shared<NodeTable>(KnotFamily::clenshaw_curtis, LevelToKnots::doubling)
                         : std::make_shared<NodeTable>(c.family, c.rule);
  TermStore store(target, *cache, nodes);
  const std::size_t n_model = target.fidelity_dims();

  std::vector<MultiIndex> fidelities;
  if (single) {
    fidelities.push_back(label);
  } else {
    for (int a = 1; a <= c.max_fidelity; ++a) fidelities.push_back(MultiIndex{a});
  }
  out.open_history(fidelities);

  try {
    if (reference_run) {
      const auto set = smolyak_set(target.parameter_dims(), c.sparse_grid_level);
      const auto s = assemble(set, store);
      summary.status = "complete";
      summary.cost = cache->total_cost();
      out.snapshot(s, set, summary.cost, n_model);
      out.finish(s, set, n_model);
      out.spectra(analyse_fidelities(set, store, c.plateau), label, {}, 0);
    } else {
      AdaptConfig ac;
      ac.family = c.family;
      ac.rule = c.rule;
      ac.stopping = c.stopping;
      ac.plateau = c.plateau;
      ac.snapshot_costs = c.snapshots.thresholds(c.stopping.max_cost);
      ac.on_iteration = [&](const IterationRecord& r) { out.iteration(r, label); };
      const auto on_snap = [&](const Snapshot& s) { out.snapshot(s.surrogate, s.set, s.cost, n_model); };
      const bool plateau = c.algorithm == Algorithm::plateau_misc;
      auto res = plateau ? run_plateau_misc(store, ac, on_snap) : run_misc(store, ac, on_snap);
      summary.status = res.status;
      summary.cost = res.cost;
      summary.iterations = static_cast<int>(res.history.size());
      summary.saturated.assign(res.saturated.begin(), res.saturated.end());
      out.finish(res.surrogate, res.set, n_model);
      out.spectra(analyse_fidelities(res.surrogate.set(), store, c.plateau), label, res.plateau_history,
                  summary.iterations);
    }
  } catch (const std::exception& e) {
    summary.status = std::string("failed: ") + e.what();
    summary.cost = cache->total_cost();
    out.summary(summary, c, seed);
    throw;
  }
  summary.final_l2 = out.last_l2();
  out.summary(summary, c, seed);
  return summary;
}

// ---------------------------------------------------------------------------
// Comparison

namespace {

struct ErrorRow {
  double cost, l2, h1, ks2;
};

std::vector<ErrorRow> read_errors(const std::filesystem::path& dir) {
  const auto path = dir / "errors.csv";
  std::ifstream in(path);
  if (!in) throw InputError("missing " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "snapshot_cost,l2,h1,ks2") {
    throw InputError("unexpected header in " + path.string());
  }
  std::vector<ErrorRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
      }
    }
    if (v.size() != 4) throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
    rows.push_back({v[0], v[1], v[2], v[3]});
  }
  if (rows.empty()) throw InputError("no snapshots in " + path.string());
  return rows;
}

double ratio(double a, double b) {
  if (a == b) return 1.0;
  return a / b;
}

}  // namespace

void compare_runs(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b,
                  const std::filesystem::path& out_file) {
  const auto a = read_errors(dir_a);
  const auto b = read_errors(dir_b);
  std::vector<std::pair<ErrorRow, ErrorRow>> rows;
  for (const auto& ra : a) {
    const ErrorRow* match = nullptr;
    for (const auto& rb : b) {
      if (rb.cost <= ra.cost) match = &rb;
    }
    if (match) rows.emplace_back(ra, *match);
  }
  if (rows.empty()) throw InputError("no overlapping snapshot costs between the two runs");
  if (out_file.has_parent_path()) std::filesystem::create_directories(out_file.parent_path());
  auto os = open_out(out_file);
  os << "# alignment: each snapshot of A is paired with the last snapshot of B at or below its cost; ratios are A/B\n";
  CsvWriter csv(os);
  csv.header({"cost_a", "cost_b", "l2_a", "l2_b", "l2_ratio", "h1_a", "h1_b", "h1_ratio", "ks2_a", "ks2_b",
              "ks2_ratio"});
  for (const auto& [ra, rb] : rows) {
    csv.row(ra.cost, rb.cost, ra.l2, rb.l2, ratio(ra.l2, rb.l2), ra.h1, rb.h1, ratio(ra.h1, rb.h1), ra.ks2, rb.ks2,
            ratio(ra.ks2, rb.ks2));
  }
}

}  // namespace pmisc
