#include "pmisc/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace pmisc {

MultiIndex MultiIndex::join(const MultiIndex& head, const MultiIndex& tail) {
  std::vector<int> e;
  e.reserve(head.size() + tail.size());
  e.insert(e.end(), head.entries_.begin(), head.entries_.end());
  e.insert(e.end(), tail.entries_.begin(), tail.entries_.end());
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::forward(std::size_t dim) const {
  MultiIndex out = *this;
  ++out.entries_.at(dim);
  return out;
}

MultiIndex MultiIndex::backward(std::size_t dim) const {
  MultiIndex out = *this;
  --out.entries_.at(dim);
  return out;
}

MultiIndex MultiIndex::head(std::size_t n) const {
  return MultiIndex(std::vector<int>(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n)));
}

MultiIndex MultiIndex::tail(std::size_t from) const {
  return MultiIndex(std::vector<int>(entries_.begin() + static_cast<std::ptrdiff_t>(from), entries_.end()));
}

int MultiIndex::total() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

bool MultiIndex::dominated_by(const MultiIndex& other) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] > other.entries_[i]) return false;
  }
  return true;
}

std::string MultiIndex::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(entries_[i]);
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& idx) {
  os << '[';
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  return os << ']';
}

std::size_t MultiIndexHash::operator()(const MultiIndex& idx) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int v : idx.entries()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

MultiIndexSet::MultiIndexSet(std::size_t dim, std::initializer_list<MultiIndex> members) : dim_(dim) {
  for (const auto& m : members) insert(m);
}

bool MultiIndexSet::insert(const MultiIndex& idx) {
  if (idx.size() != dim_) throw std::invalid_argument("MultiIndexSet: dimension mismatch");
  return members_.insert(idx).second;
}

void MultiIndexSet::insert(const MultiIndexSet& other) {
  for (const auto& m : other) insert(m);
}

namespace {

bool backward_neighbours_present(const MultiIndexSet& set, const MultiIndex& idx) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] > 1 && !set.contains(idx.backward(i))) return false;
  }
  return true;
}

void require_admissible(const MultiIndexSet& set, const char* who) {
  if (!is_admissible(set)) throw std::invalid_argument(std::string(who) + ": multi-index set is not admissible");
}

}  // namespace

bool is_admissible(const MultiIndexSet& set) {
  if (set.empty()) throw std::invalid_argument("is_admissible: empty set");
  return std::all_of(set.begin(), set.end(), [&](const MultiIndex& g) {
    return std::all_of(g.entries().begin(), g.entries().end(), [](int v) { return v >= 1; }) &&
           backward_neighbours_present(set, g);
  });
}

MultiIndexSet margin(const MultiIndexSet& set) {
  require_admissible(set, "margin");
  MultiIndexSet out(set.dim());
  for (const auto& g : set) {
    for (std::size_t i = 0; i < set.dim(); ++i) {
      auto mu = g.forward(i);
      if (!set.contains(mu)) out.insert(mu);
    }
  }
  return out;
}

MultiIndexSet reduced_margin(const MultiIndexSet& set) {
  MultiIndexSet out(set.dim());
  for (const auto& mu : margin(set)) {
    if (backward_neighbours_present(set, mu)) out.insert(mu);
  }
  return out;
}

MultiIndexSet backfill_set(const MultiIndexSet& set, const MultiIndex& mu) {
  if (set.contains(mu)) throw std::invalid_argument("backfill_set: mu already in the set");
  MultiIndexSet out(set.dim());
  std::vector<MultiIndex> stack{mu};
  while (!stack.empty()) {
    const MultiIndex cur = std::move(stack.back());
    stack.pop_back();
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] <= 1) continue;
      auto nb = cur.backward(i);
      if (set.contains(nb) || out.contains(nb)) continue;
      out.insert(nb);
      stack.push_back(std::move(nb));
    }
  }
  return out;
}

MultiIndexSet modified_reduced_margin(const MultiIndexSet& set, const SaturatedSet& saturated, std::size_t n_model) {
  MultiIndexSet out(set.dim());
  for (const auto& mu : margin(set)) {
    bool ok = true;
    for (std::size_t j = 0; j < mu.size() && ok; ++j) {
      if (mu[j] <= 1) continue;
      const auto nb = mu.backward(j);
      ok = set.contains(nb) || saturated.contains(nb.head(n_model));
    }
    if (!ok) continue;
    // The backward-neighbour test does not look past one step; the closure check
    // keeps every backfilled index at a saturated fidelity.
    const auto fill = backfill_set(set, mu);
    ok = std::all_of(fill.begin(), fill.end(),
                     [&](const MultiIndex& b) { return saturated.contains(b.head(n_model)); });
    if (ok) out.insert(mu);
  }
  return out;
}

MultiIndexSet restrict_to_fidelity(const MultiIndexSet& set, const MultiIndex& fidelity) {
  const std::size_t n_model = fidelity.size();
  MultiIndexSet out(set.dim() - n_model);
  for (const auto& g : set) {
    if (std::equal(fidelity.entries().begin(), fidelity.entries().end(), g.entries().begin())) {
      out.insert(g.tail(n_model));
    }
  }
  return out;
}

MultiIndexSet active_fidelities(const MultiIndexSet& set, std::size_t n_model) {
  MultiIndexSet out(n_model);
  for (const auto& g : set) out.insert(g.head(n_model));
  return out;
}

MultiIndexSet smolyak_set(std::size_t dim, int w) {
  MultiIndexSet out(dim);
  const int cap = static_cast<int>(dim) + w;
  MultiIndex cur = MultiIndex::ones(dim);
  // Odometer over the simplex {|beta|_1 <= dim + w}.
  while (true) {
    out.insert(cur);
    std::size_t d = 0;
    for (; d < dim; ++d) {
      ++cur[d];
      if (cur.total() <= cap) break;
      cur[d] = 1;
    }
    if (d == dim) break;
  }
  return out;
}

}  // namespace pmisc
