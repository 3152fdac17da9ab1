#include "pmisc/combiner.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "pmisc/csv.hpp"

namespace pmisc {

int combination_coeff(const MultiIndexSet& set, const MultiIndex& gamma) {
  const std::size_t n = gamma.size();
  int c = 0;
  MultiIndex probe = gamma;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int parity = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const bool on = (mask >> i) & 1U;
      probe[i] = gamma[i] + (on ? 1 : 0);
      if (on) parity = -parity;
    }
    if (set.contains(probe)) c += parity;
  }
  return c;
}

std::map<MultiIndex, int> combination_coeffs(const MultiIndexSet& set) {
  if (!is_admissible(set)) throw std::invalid_argument("combination_coeffs: set is not admissible");
  std::map<MultiIndex, int> out;
  for (const auto& g : set) {
    if (int c = combination_coeff(set, g); c != 0) out.emplace(g, c);
  }
  return out;
}

std::map<MultiIndex, std::vector<std::vector<double>>> collocation_requests(const MultiIndexSet& set,
                                                                           std::size_t n_model,
                                                                           const NodeTable& nodes) {
  std::map<MultiIndex, std::set<std::vector<std::uint64_t>>> keyed;
  for (const auto& [g, c] : combination_coeffs(set)) {
    auto& bucket = keyed[g.head(n_model)];
    const auto grid = nodes.grid(g.tail(n_model));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto y = grid.point(i);
      std::vector<std::uint64_t> bits(y.size());
      std::transform(y.begin(), y.end(), bits.begin(), [](double v) { return std::bit_cast<std::uint64_t>(v); });
      bucket.insert(std::move(bits));
    }
  }
  std::map<MultiIndex, std::vector<std::vector<double>>> out;
  for (auto& [alpha, pts] : keyed) {
    auto& dst = out[alpha];
    for (const auto& bits : pts) {
      std::vector<double> y(bits.size());
      std::transform(bits.begin(), bits.end(), y.begin(), [](std::uint64_t b) { return std::bit_cast<double>(b); });
      dst.push_back(std::move(y));
    }
  }
  return out;
}

TermData::TermData(MultiIndex levels, std::vector<double> values, const NodeTable& nodes)
    : levels_(std::move(levels)), values_(std::move(values)), nodes_(&nodes) {
  // Contract the table with the 1D quadrature weights, last dimension first.
  std::vector<double> work = values_;
  std::size_t len = work.size();
  for (std::size_t d = levels_.size(); d-- > 0;) {
    const auto& q = nodes.level(levels_[d]).quad;
    const std::size_t m = q.size();
    const std::size_t outer = len / m;
    for (std::size_t o = 0; o < outer; ++o) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) acc += work[o * m + k] * q[k];
      work[o] = acc;
    }
    len = outer;
  }
  quadrature_ = work[0];
}

std::span<const double> TermData::chebyshev() const {
  std::call_once(cheb_once_, [this] {
    // Apply the inverse Vandermonde of each axis along that axis.
    std::vector<double> cur = values_;
    std::vector<std::size_t> shape(levels_.size());
    for (std::size_t d = 0; d < levels_.size(); ++d) shape[d] = nodes_->count(levels_[d]);
    std::vector<double> next(cur.size());
    for (std::size_t d = 0; d < levels_.size(); ++d) {
      const auto& inv = nodes_->level(levels_[d]).cheb_inverse;
      const std::size_t m = shape[d];
      std::size_t inner = 1;
      for (std::size_t e = d + 1; e < shape.size(); ++e) inner *= shape[e];
      const std::size_t outer = cur.size() / (m * inner);
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t i = 0; i < inner; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += inv[j * m + k] * cur[(o * m + k) * inner + i];
            next[(o * m + j) * inner + i] = acc;
          }
        }
      }
      cur.swap(next);
    }
    cheb_ = std::move(cur);
  });
  return cheb_;
}

TermStore::TermStore(const ModelHierarchy& model, EvalCache& cache, std::shared_ptr<const NodeTable> nodes)
    : model_(model),
      cache_(cache),
      nodes_(std::move(nodes)),
      n_model_(model.fidelity_dims()),
      n_param_(model.parameter_dims()) {}

bool TermStore::has_term(const MultiIndex& joint) const {
  std::lock_guard lock(mutex_);
  return terms_.count(joint) != 0;
}

std::shared_ptr<const TermData> TermStore::term(const MultiIndex& joint) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = terms_.find(joint); it != terms_.end()) return it->second;
  }
  const MultiIndex fidelity = joint.head(n_model_);
  const MultiIndex levels = joint.tail(n_model_);
  const auto grid = nodes_->grid(levels);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto y = grid.point(i);
    values[i] = cache_.get_or_eval(model_, fidelity, y).value;
  }
  auto data = std::make_shared<const TermData>(levels, std::move(values), *nodes_);
  std::lock_guard lock(mutex_);
  return terms_.try_emplace(joint, std::move(data)).first->second;
}

Surrogate::Surrogate(MultiIndexSet set, std::size_t n_model, std::shared_ptr<const NodeTable> nodes,
                     std::vector<TensorTerm> terms)
    : set_(std::move(set)), n_model_(n_model), nodes_(std::move(nodes)), terms_(std::move(terms)) {}

int Surrogate::coeff(const MultiIndex& joint) const {
  if (!set_.contains(joint)) return 0;
  return combination_coeff(set_, joint);
}

void Surrogate::require_complete() const {
  for (const auto& t : terms_) {
    if (t.coeff != 0 && !t.data) throw std::logic_error("Surrogate: incomplete evaluation table");
  }
}

double Surrogate::evaluate(std::span<const double> y) const {
  return evaluate_many({std::vector<double>(y.begin(), y.end())})[0];
}

std::vector<double> Surrogate::evaluate_many(const std::vector<std::vector<double>>& ys) const {
  require_complete();
  const std::size_t n = n_param();
  std::vector<double> out(ys.size(), 0.0);
  // Basis values per (dimension, level) are shared by every term at that level.
  int max_level = 1;
  for (const auto& t : terms_) {
    for (int l : t.levels.entries()) max_level = std::max(max_level, l);
  }
  std::vector<const LevelData*> level_data(static_cast<std::size_t>(max_level) + 1, nullptr);
  for (const auto& t : terms_) {
    for (int l : t.levels.entries()) {
      if (!level_data[static_cast<std::size_t>(l)]) level_data[static_cast<std::size_t>(l)] = &nodes_->level(l);
    }
  }
  std::vector<std::vector<std::vector<double>>> basis(n, std::vector<std::vector<double>>(level_data.size()));
  std::vector<double> work;
  for (std::size_t p = 0; p < ys.size(); ++p) {
    const auto& y = ys[p];
    if (y.size() != n) throw std::invalid_argument("Surrogate::evaluate: point dimension mismatch");
    for (std::size_t d = 0; d < n; ++d) {
      for (std::size_t l = 1; l < level_data.size(); ++l) {
        if (!level_data[l]) continue;
        auto& b = basis[d][l];
        b.resize(level_data[l]->points.size());
        lagrange_basis(level_data[l]->points, level_data[l]->bary, y[d], b);
      }
    }
    double total = 0.0;
    for (const auto& t : terms_) {
      if (t.coeff == 0) continue;
      const auto vals = t.data->values();
      work.assign(vals.begin(), vals.end());
      std::size_t len = work.size();
      for (std::size_t d = n; d-- > 0;) {
        const auto& b = basis[d][static_cast<std::size_t>(t.levels[d])];
        const std::size_t m = b.size();
        const std::size_t outer = len / m;
        for (std::size_t o = 0; o < outer; ++o) {
          double acc = 0.0;
          for (std::size_t k = 0; k < m; ++k) acc += work[o * m + k] * b[k];
          work[o] = acc;
        }
        len = outer;
      }
      total += t.coeff * work[0];
    }
    out[p] = total;
  }
  return out;
}

double Surrogate::expectation() const {
  require_complete();
  double e = 0.0;
  for (const auto& t : terms_) {
    if (t.coeff != 0) e += t.coeff * t.data->quadrature();
  }
  return e;
}

Surrogate assemble(const MultiIndexSet& set, TermStore& store) {
  const std::size_t n_model = store.n_model();
  std::vector<TensorTerm> terms;
  for (const auto& [g, c] : combination_coeffs(set)) {
    terms.push_back(TensorTerm{g.head(n_model), g.tail(n_model), c, store.term(g)});
  }
  return Surrogate(set, n_model, store.node_table(), std::move(terms));
}

Surrogate restrict_surrogate(const MultiIndexSet& set, const MultiIndex& fidelity, TermStore& store) {
  const auto restricted = restrict_to_fidelity(set, fidelity);
  if (restricted.empty()) throw std::invalid_argument("restrict_surrogate: fidelity is not active");
  std::vector<TensorTerm> terms;
  for (const auto& [beta, c] : combination_coeffs(restricted)) {
    terms.push_back(TensorTerm{fidelity, beta, c, store.term(MultiIndex::join(fidelity, beta))});
  }
  return Surrogate(restricted, 0, store.node_table(), std::move(terms));
}

void write_surface_csv(std::ostream& os, const Surrogate& s, std::size_t g) {
  if (s.n_param() != 2) throw std::invalid_argument("write_surface_csv: surrogate must have two parameters");
  std::vector<std::vector<double>> ys;
  ys.reserve(g * g);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double y1 = g == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(g - 1);
      const double y2 = g == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(g - 1);
      ys.push_back({y1, y2});
    }
  }
  const auto vals = s.evaluate_many(ys);
  CsvWriter csv(os);
  csv.header({"y1", "y2", "value"});
  for (std::size_t k = 0; k < ys.size(); ++k) csv.row(ys[k][0], ys[k][1], vals[k]);
}

}  // namespace pmisc
