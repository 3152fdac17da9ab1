#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pmisc/combiner.hpp"
#include "pmisc/knots.hpp"
#include "pmisc/models.hpp"
#include "pmisc/multi_index.hpp"
#include "pmisc/plateau.hpp"
#include "pmisc/spectral.hpp"

namespace pmisc {

struct StoppingCriteria {
  double max_cost = std::numeric_limits<double>::infinity();
  std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
  double min_profit = 0.0;

  bool any_finite() const;
};

struct IterationRecord;

struct AdaptConfig {
  KnotFamily family = KnotFamily::symmetric_leja;
  LevelToKnots rule = LevelToKnots::two_step;
  StoppingCriteria stopping;
  PlateauParams plateau;
  /// Increasing cumulative-cost thresholds at which snapshots are emitted.
  std::vector<double> snapshot_costs;
  /// Called after every committed refinement.
  std::function<void(const IterationRecord&)> on_iteration;
};

struct IterationRecord {
  int iteration = 0;
  MultiIndex selected;
  std::vector<MultiIndex> backfill;
  double error = 0.0;
  double work = 0.0;
  double profit = 0.0;
  double cumulative_cost = 0.0;
  /// Charged solves per fidelity after this iteration.
  std::map<MultiIndex, std::size_t> points;
  std::vector<MultiIndex> saturated;
};

/// State handed to snapshot observers. `surrogate` follows the algorithm's
/// return rule at that moment.
struct Snapshot {
  int iteration = 0;
  double cost = 0.0;
  bool final = false;
  const MultiIndexSet& set;
  const SaturatedSet& saturated;
  const Surrogate& surrogate;
};

using SnapshotCallback = std::function<void(const Snapshot&)>;

struct AdaptResult {
  Surrogate surrogate;
  MultiIndexSet set;
  SaturatedSet saturated;
  std::map<MultiIndex, int> change_points;
  std::map<MultiIndex, std::vector<PlateauRecord>> plateau_history;
  std::vector<IterationRecord> history;
  /// budget, max_iterations, min_profit, saturated or exhausted.
  std::string status;
  double cost = 0.0;
};

/// |E[I u B u {mu}] - E[I]|, evaluating the terms of B u {mu} as needed.
double error_indicator(const MultiIndexSet& set, const MultiIndex& mu, const MultiIndexSet& backfill,
                       TermStore& store);

/// Cost of the new collocation points required by B u {mu}, priced per fidelity.
double work_indicator(const MultiIndexSet& set, const MultiIndex& mu, const MultiIndexSet& backfill,
                      TermStore& store);

/// Smallest total degree among the polynomials mu's parameter index adds to
/// Lambda(I restricted to mu's fidelity); -1 if it adds none.
int min_new_degree(const MultiIndexSet& set, const MultiIndex& mu, std::size_t n_model, LevelToKnots rule);

/// True when mu's fidelity is saturated and every degree it adds reaches the
/// fidelity's change point.
bool profit_filtered(const MultiIndexSet& set, const MultiIndex& mu, const SaturatedSet& saturated,
                     const std::map<MultiIndex, int>& change_points, std::size_t n_model, LevelToKnots rule);

std::map<MultiIndex, double> filter_profits(std::map<MultiIndex, double> profits, const MultiIndexSet& set,
                                            const SaturatedSet& saturated,
                                            const std::map<MultiIndex, int>& change_points, std::size_t n_model,
                                            LevelToKnots rule);

/// Greedy loop over the reduced margin; returns the surrogate over I plus the
/// already-evaluated members of R(I).
AdaptResult run_misc(TermStore& store, const AdaptConfig& config, const SnapshotCallback& on_snapshot = {});

/// Greedy loop with plateau detection, saturation, profit filtering and
/// backfilled refinement; returns the surrogate over I.
AdaptResult run_plateau_misc(TermStore& store, const AdaptConfig& config, const SnapshotCallback& on_snapshot = {});

struct FidelitySpectrum {
  Surrogate restricted;
  SpectralExpansion expansion;
  Envelope envelope;
  PlateauReport report;
};

/// Restricted surrogate, spectrum, envelope and plateau fit per active fidelity.
std::map<MultiIndex, FidelitySpectrum> analyse_fidelities(const MultiIndexSet& set, TermStore& store,
                                                          const PlateauParams& params);

/// Single-fidelity Clenshaw-Curtis/doubling surrogate over the isotropic set
/// |beta|_1 <= n + w at fidelity `fidelity`.
Surrogate build_reference(const ModelHierarchy& model, int w, const MultiIndex& fidelity);

}  // namespace pmisc
