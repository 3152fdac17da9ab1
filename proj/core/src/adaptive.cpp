#include "pmisc/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pmisc {

bool StoppingCriteria::any_finite() const {
  return std::isfinite(max_cost) || max_iterations != std::numeric_limits<std::size_t>::max() || min_profit > 0.0;
}

namespace {

bool knots_nested(KnotFamily family, LevelToKnots rule) {
  return family == KnotFamily::symmetric_leja || rule == LevelToKnots::doubling;
}

// Points added along one axis when a level goes from l-1 to l (nested knots).
std::size_t level_jump(LevelToKnots rule, int level) {
  const std::size_t prev = level > 1 ? level_to_knots(rule, level - 1) : 0;
  return level_to_knots(rule, level) - prev;
}

MultiIndexSet with_new(const MultiIndexSet& set, const MultiIndex& mu, const MultiIndexSet& backfill) {
  MultiIndexSet out = set;
  out.insert(backfill);
  out.insert(mu);
  return out;
}

}  // namespace

double error_indicator(const MultiIndexSet& set, const MultiIndex& mu, const MultiIndexSet& backfill,
                       TermStore& store) {
  MultiIndexSet added = backfill;
  added.insert(mu);
  const std::size_t n = mu.size();
  // Only indices within one unit cube below a new index change coefficient.
  std::set<MultiIndex> touched;
  for (const auto& nu : added) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      MultiIndex g = nu;
      bool valid = true;
      for (std::size_t i = 0; i < n && valid; ++i) {
        if ((mask >> i) & 1U) {
          g[i] -= 1;
          valid = g[i] >= 1;
        }
      }
      if (valid) touched.insert(std::move(g));
    }
  }
  double delta = 0.0;
  for (const auto& g : touched) {
    const int dc = combination_coeff(added, g);
    if (dc == 0) continue;
    if (!set.contains(g) && !added.contains(g)) {
      throw std::logic_error("error_indicator: refined set is not admissible");
    }
    delta += dc * store.term(g)->quadrature();
  }
  return std::abs(delta);
}

double work_indicator(const MultiIndexSet& set, const MultiIndex& mu, const MultiIndexSet& backfill,
                      TermStore& store) {
  const std::size_t n_model = store.n_model();
  const auto& model = store.model();
  const auto rule = store.nodes().rule();
  MultiIndexSet added = backfill;
  added.insert(mu);
  double work = 0.0;
  if (knots_nested(store.nodes().family(), rule)) {
    // Each admissible addition contributes its own hierarchical surplus grid.
    for (const auto& nu : added) {
      std::size_t count = 1;
      for (std::size_t j = n_model; j < nu.size(); ++j) count *= level_jump(rule, nu[j]);
      work += model.cost(nu.head(n_model)) * static_cast<double>(count);
    }
  } else {
    const auto after = with_new(set, mu, backfill);
    for (const auto& alpha : active_fidelities(added, n_model)) {
      const auto before_set = restrict_to_fidelity(set, alpha);
      const auto after_set = restrict_to_fidelity(after, alpha);
      const std::size_t n_before =
          before_set.empty() ? 0 : collocation_requests(before_set, 0, store.nodes()).begin()->second.size();
      const std::size_t n_after = collocation_requests(after_set, 0, store.nodes()).begin()->second.size();
      if (n_after > n_before) work += model.cost(alpha) * static_cast<double>(n_after - n_before);
    }
  }
  // Non-nested grids can lose points; one solve at mu's fidelity is the floor.
  return std::max(work, model.cost(mu.head(n_model)));
}

int min_new_degree(const MultiIndexSet& set, const MultiIndex& mu, std::size_t n_model, LevelToKnots rule) {
  const MultiIndex alpha = mu.head(n_model);
  const MultiIndex beta = mu.tail(n_model);
  const auto restricted = restrict_to_fidelity(set, alpha);
  const std::size_t n = beta.size();
  std::vector<int> ext(n);
  for (std::size_t j = 0; j < n; ++j) ext[j] = static_cast<int>(level_to_knots(rule, beta[j]));
  std::vector<std::vector<int>> boxes;
  for (const auto& b : restricted) {
    std::vector<int> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = static_cast<int>(level_to_knots(rule, b[j]));
    boxes.push_back(std::move(e));
  }
  int best = -1;
  std::vector<int> p(n, 0);
  for (;;) {
    const int total = std::accumulate(p.begin(), p.end(), 0);
    if (best < 0 || total < best) {
      const bool covered = std::any_of(boxes.begin(), boxes.end(), [&](const std::vector<int>& e) {
        for (std::size_t j = 0; j < n; ++j) {
          if (p[j] >= e[j]) return false;
        }
        return true;
      });
      if (!covered) best = total;
    }
    std::size_t d = n;
    while (d-- > 0) {
      if (++p[d] < ext[d]) break;
      p[d] = 0;
    }
    if (d == static_cast<std::size_t>(-1)) break;
  }
  return best;
}

bool profit_filtered(const MultiIndexSet& set, const MultiIndex& mu, const SaturatedSet& saturated,
                     const std::map<MultiIndex, int>& change_points, std::size_t n_model, LevelToKnots rule) {
  const MultiIndex alpha = mu.head(n_model);
  if (!saturated.contains(alpha)) return false;
  const auto it = change_points.find(alpha);
  if (it == change_points.end()) throw std::logic_error("profit_filtered: saturated fidelity without change point");
  const int lowest = min_new_degree(set, mu, n_model, rule);
  // An index adding no polynomial at all cannot improve this fidelity either.
  return lowest < 0 || lowest >= it->second;
}

std::map<MultiIndex, double> filter_profits(std::map<MultiIndex, double> profits, const MultiIndexSet& set,
                                            const SaturatedSet& saturated,
                                            const std::map<MultiIndex, int>& change_points, std::size_t n_model,
                                            LevelToKnots rule) {
  for (auto& [mu, p] : profits) {
    if (profit_filtered(set, mu, saturated, change_points, n_model, rule)) p = 0.0;
  }
  return profits;
}

std::map<MultiIndex, FidelitySpectrum> analyse_fidelities(const MultiIndexSet& set, TermStore& store,
                                                          const PlateauParams& params) {
  std::map<MultiIndex, FidelitySpectrum> out;
  for (const auto& alpha : active_fidelities(set, store.n_model())) {
    FidelitySpectrum fs;
    fs.restricted = restrict_surrogate(set, alpha, store);
    fs.expansion = to_spectral(fs.restricted);
    fs.envelope = envelope(fs.expansion);
    fs.report = detect_plateau(fs.envelope, params);
    out.emplace(alpha, std::move(fs));
  }
  return out;
}

Surrogate build_reference(const ModelHierarchy& model, int w, const MultiIndex& fidelity) {
  if (w < 0) throw std::invalid_argument("build_reference: w must be >= 0");
  FixedFidelity fixed(model, fidelity);
  EvalCache cache;
  TermStore store(fixed, cache,
                  std::make_shared<NodeTable>(KnotFamily::clenshaw_curtis, LevelToKnots::doubling));
  return assemble(smolyak_set(model.parameter_dims(), w), store);
}

namespace {

struct Candidate {
  MultiIndex mu;
  MultiIndexSet backfill;
  double error = 0.0;
  double work = 0.0;
  double profit = 0.0;
  bool filtered = false;
};

class GreedyLoop {
 public:
  GreedyLoop(TermStore& store, const AdaptConfig& config, bool plateau, const SnapshotCallback& on_snapshot)
      : store_(store),
        config_(config),
        plateau_(plateau),
        on_snapshot_(on_snapshot),
        n_model_(store.n_model()),
        dim_(store.n_model() + store.n_param()) {}

  AdaptResult run() {
    if (!config_.stopping.any_finite()) throw std::invalid_argument("adaptive: every stopping criterion is infinite");
    config_.plateau.validate();
    if (store_.nodes().family() != config_.family || store_.nodes().rule() != config_.rule) {
      throw std::invalid_argument("adaptive: term store knots differ from the configured family/rule");
    }
    if (!std::is_sorted(config_.snapshot_costs.begin(), config_.snapshot_costs.end())) {
      throw std::invalid_argument("adaptive: snapshot costs must be increasing");
    }
    res_.set = MultiIndexSet(dim_);
    res_.saturated = SaturatedSet(n_model_);
    const auto root = MultiIndex::ones(dim_);
    store_.term(root);
    res_.set.insert(root);

    const auto& stop = config_.stopping;
    int iteration = 0;
    for (;;) {
      if (static_cast<std::size_t>(iteration) >= stop.max_iterations) {
        res_.status = "max_iterations";
        break;
      }
      if (cost() >= stop.max_cost) {
        res_.status = "budget";
        break;
      }
      auto candidates = estimate();
      if (candidates.empty()) {
        res_.status = "exhausted";
        break;
      }
      if (plateau_) {
        detect(iteration + 1);
        for (auto& c : candidates) {
          c.filtered = profit_filtered(res_.set, c.mu, res_.saturated, res_.change_points, n_model_,
                                       store_.nodes().rule());
        }
      }
      const Candidate* best = nullptr;
      for (const auto& c : candidates) {
        if (c.filtered) continue;
        if (!best || c.profit > best->profit) best = &c;
      }
      if (!best) {
        res_.status = "saturated";
        break;
      }
      if (best->profit < stop.min_profit) {
        res_.status = "min_profit";
        break;
      }
      commit(*best);
      ++iteration;
      record(iteration, *best);
      bool crossed = false;
      while (next_snapshot_ < config_.snapshot_costs.size() && cost() >= config_.snapshot_costs[next_snapshot_]) {
        ++next_snapshot_;
        crossed = true;
      }
      if (crossed) emit(iteration, false);
    }
    res_.surrogate = current_surrogate();
    res_.cost = cost();
    if (on_snapshot_) {
      on_snapshot_(Snapshot{iteration, res_.cost, true, res_.set, res_.saturated, res_.surrogate});
    }
    return std::move(res_);
  }

 private:
  double cost() const { return store_.cache().total_cost(); }

  bool within_limits(const MultiIndex& mu) const {
    const auto& model = store_.model();
    for (std::size_t d = 0; d < n_model_; ++d) {
      if (mu[d] > model.max_level(d)) return false;
    }
    return true;
  }

  std::vector<Candidate> estimate() {
    const auto margin_set = plateau_ ? modified_reduced_margin(res_.set, res_.saturated, n_model_)
                                     : reduced_margin(res_.set);
    std::vector<Candidate> out;
    for (const auto& mu : margin_set) {
      if (!within_limits(mu)) continue;
      Candidate c;
      c.mu = mu;
      c.backfill = plateau_ ? backfill_set(res_.set, mu) : MultiIndexSet(dim_);
      bool ok = true;
      for (const auto& b : c.backfill) ok = ok && within_limits(b);
      if (!ok) continue;
      store_.term(mu);
      for (const auto& b : c.backfill) store_.term(b);
      c.error = error_indicator(res_.set, mu, c.backfill, store_);
      c.work = work_indicator(res_.set, mu, c.backfill, store_);
      c.profit = c.error / c.work;
      out.push_back(std::move(c));
    }
    return out;
  }

  void detect(int iteration) {
    for (const auto& alpha : active_fidelities(res_.set, n_model_)) {
      if (res_.saturated.contains(alpha)) continue;
      const auto restricted = restrict_to_fidelity(res_.set, alpha);
      auto& seen = detected_size_[alpha];
      if (seen == restricted.size()) continue;
      seen = restricted.size();
      const auto s = restrict_surrogate(res_.set, alpha, store_);
      const auto report = detect_plateau(envelope(to_spectral(s)), config_.plateau);
      res_.plateau_history[alpha].push_back(PlateauRecord{iteration, report});
      if (report.is_plateau) {
        res_.saturated.insert(alpha);
        res_.change_points[alpha] = report.kappa;
      }
    }
  }

  void commit(const Candidate& c) {
    for (const auto& b : c.backfill) {
      if (!res_.saturated.contains(b.head(n_model_))) {
        throw std::logic_error("adaptive: backfill index " + b.to_string() + " has an unsaturated fidelity");
      }
    }
    auto next = with_new(res_.set, c.mu, c.backfill);
    if (!is_admissible(next)) throw std::logic_error("adaptive: refinement breaks admissibility");
    res_.set = std::move(next);
  }

  void record(int iteration, const Candidate& c) {
    IterationRecord r;
    r.iteration = iteration;
    r.selected = c.mu;
    r.backfill.assign(c.backfill.begin(), c.backfill.end());
    r.error = c.error;
    r.work = c.work;
    r.profit = c.profit;
    r.cumulative_cost = cost();
    r.points = store_.cache().points_per_fidelity();
    r.saturated.assign(res_.saturated.begin(), res_.saturated.end());
    res_.history.push_back(std::move(r));
    if (config_.on_iteration) config_.on_iteration(res_.history.back());
  }

  Surrogate current_surrogate() {
    if (plateau_) return assemble(res_.set, store_);
    MultiIndexSet extended = res_.set;
    for (const auto& mu : reduced_margin(res_.set)) {
      if (store_.has_term(mu)) extended.insert(mu);
    }
    return assemble(extended, store_);
  }

  void emit(int iteration, bool final) {
    if (!on_snapshot_) return;
    const auto s = current_surrogate();
    on_snapshot_(Snapshot{iteration, cost(), final, res_.set, res_.saturated, s});
  }

  TermStore& store_;
  const AdaptConfig& config_;
  bool plateau_;
  const SnapshotCallback& on_snapshot_;
  std::size_t n_model_;
  std::size_t dim_;
  std::size_t next_snapshot_ = 0;
  std::map<MultiIndex, std::size_t> detected_size_;
  AdaptResult res_;
};

}  // namespace

AdaptResult run_misc(TermStore& store, const AdaptConfig& config, const SnapshotCallback& on_snapshot) {
  return GreedyLoop(store, config, false, on_snapshot).run();
}

AdaptResult run_plateau_misc(TermStore& store, const AdaptConfig& config, const SnapshotCallback& on_snapshot) {
  return GreedyLoop(store, config, true, on_snapshot).run();
}

}  // namespace pmisc
