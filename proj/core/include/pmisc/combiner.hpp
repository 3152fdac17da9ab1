#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "pmisc/models.hpp"
#include "pmisc/multi_index.hpp"
#include "pmisc/tensor.hpp"

namespace pmisc {

/// c_gamma = sum over j in {0,1}^n with gamma + j in I of (-1)^|j|_1.
/// Zero coefficients are omitted. Throws std::invalid_argument if I is not admissible.
std::map<MultiIndex, int> combination_coeffs(const MultiIndexSet& set);

/// Coefficient of a single index, without the admissibility check.
int combination_coeff(const MultiIndexSet& set, const MultiIndex& gamma);

/// Distinct collocation points per active fidelity, over terms with non-zero
/// coefficient. Points compare by exact bit pattern.
std::map<MultiIndex, std::vector<std::vector<double>>> collocation_requests(const MultiIndexSet& set,
                                                                           std::size_t n_model,
                                                                           const NodeTable& nodes);

/// Model values on one tensor grid plus quantities derived from them.
class TermData {
 public:
  TermData(MultiIndex levels, std::vector<double> values, const NodeTable& nodes);

  const MultiIndex& levels() const { return levels_; }
  std::span<const double> values() const { return values_; }
  /// Exact integral of the tensor interpolant over [0,1]^n.
  double quadrature() const { return quadrature_; }
  /// Chebyshev coefficients of the tensor interpolant, row-major with the same
  /// shape as values(); entry (k1,...,kn) multiplies prod T_kj(2 yj - 1).
  std::span<const double> chebyshev() const;

 private:
  MultiIndex levels_;
  std::vector<double> values_;
  const NodeTable* nodes_;
  double quadrature_ = 0.0;
  mutable std::once_flag cheb_once_;
  mutable std::vector<double> cheb_;
};

/// Evaluates tensor terms [alpha, beta] through an EvalCache and memoises the
/// resulting tables.
class TermStore {
 public:
  TermStore(const ModelHierarchy& model, EvalCache& cache, std::shared_ptr<const NodeTable> nodes);

  std::size_t n_model() const { return n_model_; }
  std::size_t n_param() const { return n_param_; }
  const NodeTable& nodes() const { return *nodes_; }
  std::shared_ptr<const NodeTable> node_table() const { return nodes_; }
  const ModelHierarchy& model() const { return model_; }
  EvalCache& cache() { return cache_; }

  /// Evaluates on first use; cost accrues in the cache ledger.
  std::shared_ptr<const TermData> term(const MultiIndex& joint);
  bool has_term(const MultiIndex& joint) const;

 private:
  const ModelHierarchy& model_;
  EvalCache& cache_;
  std::shared_ptr<const NodeTable> nodes_;
  std::size_t n_model_;
  std::size_t n_param_;
  mutable std::mutex mutex_;
  std::unordered_map<MultiIndex, std::shared_ptr<const TermData>, MultiIndexHash> terms_;
};

struct TensorTerm {
  MultiIndex fidelity;
  MultiIndex levels;
  int coeff = 0;
  std::shared_ptr<const TermData> data;
};

/// Combination-technique surrogate: sum of c_gamma times tensor interpolants of
/// q^alpha. Immutable after assembly; evaluation is thread-safe.
class Surrogate {
 public:
  Surrogate() = default;
  Surrogate(MultiIndexSet set, std::size_t n_model, std::shared_ptr<const NodeTable> nodes,
            std::vector<TensorTerm> terms);

  const MultiIndexSet& set() const { return set_; }
  std::size_t n_model() const { return n_model_; }
  std::size_t n_param() const { return set_.dim() - n_model_; }
  const NodeTable& nodes() const { return *nodes_; }
  std::shared_ptr<const NodeTable> node_table() const { return nodes_; }
  const std::vector<TensorTerm>& terms() const { return terms_; }
  /// Coefficient per member of the set (including zeros).
  int coeff(const MultiIndex& joint) const;

  /// Throws std::logic_error if a non-zero term lacks its table.
  double evaluate(std::span<const double> y) const;
  std::vector<double> evaluate_many(const std::vector<std::vector<double>>& ys) const;
  double expectation() const;

 private:
  void require_complete() const;

  MultiIndexSet set_;
  std::size_t n_model_ = 0;
  std::shared_ptr<const NodeTable> nodes_;
  std::vector<TensorTerm> terms_;
};

/// Assembles the surrogate over `set`, evaluating every non-zero term.
Surrogate assemble(const MultiIndexSet& set, TermStore& store);

/// Single-fidelity surrogate over the parameter set I|alpha with its own
/// combination coefficients.
Surrogate restrict_surrogate(const MultiIndexSet& set, const MultiIndex& fidelity, TermStore& store);

/// y1, y2, value on a regular g x g grid over [0,1]^2 (requires two parameters).
void write_surface_csv(std::ostream& os, const Surrogate& s, std::size_t g = 101);

}  // namespace pmisc
