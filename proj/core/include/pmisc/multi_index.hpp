#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace pmisc {

/// Fixed-length vector of positive integers. Joint indices are [fidelity, parameter]
/// with the fidelity part first. Ordering is lexicographic.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {}
  MultiIndex(std::initializer_list<int> entries) : entries_(entries) {}

  static MultiIndex ones(std::size_t n) { return MultiIndex(std::vector<int>(n, 1)); }
  static MultiIndex join(const MultiIndex& head, const MultiIndex& tail);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  int& operator[](std::size_t i) { return entries_[i]; }
  std::span<const int> entries() const { return entries_; }
  const std::vector<int>& vec() const { return entries_; }

  MultiIndex forward(std::size_t dim) const;
  MultiIndex backward(std::size_t dim) const;
  MultiIndex head(std::size_t n) const;
  MultiIndex tail(std::size_t from) const;
  int total() const;
  bool dominated_by(const MultiIndex& other) const;  // componentwise <=

  /// "1-2-3"; used in CSV cells and file names.
  std::string to_string() const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> entries_;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& idx);

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& idx) const noexcept;
};

/// Finite set of multi-indices of uniform length, iterated in lexicographic order.
class MultiIndexSet {
 public:
  using const_iterator = std::set<MultiIndex>::const_iterator;

  MultiIndexSet() = default;
  explicit MultiIndexSet(std::size_t dim) : dim_(dim) {}
  MultiIndexSet(std::size_t dim, std::initializer_list<MultiIndex> members);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(const MultiIndex& idx) const { return members_.count(idx) != 0; }
  bool insert(const MultiIndex& idx);
  void insert(const MultiIndexSet& other);
  bool erase(const MultiIndex& idx) { return members_.erase(idx) != 0; }

  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  const std::set<MultiIndex>& members() const { return members_; }

  bool operator==(const MultiIndexSet&) const = default;

 private:
  std::size_t dim_ = 0;
  std::set<MultiIndex> members_;
};

/// Fidelities whose spectral envelopes showed a plateau; grows monotonically.
using SaturatedSet = MultiIndexSet;

/// Downward-closedness check. Throws std::invalid_argument on an empty set.
bool is_admissible(const MultiIndexSet& set);

/// All gamma + e_i for gamma in the set, minus members. Requires an admissible set.
MultiIndexSet margin(const MultiIndexSet& set);

/// Margin members whose every backward neighbour is in the set.
MultiIndexSet reduced_margin(const MultiIndexSet& set);

/// Margin members mu such that every backward neighbour mu - e_j is in the set or
/// has a saturated fidelity, and whose backfill closure touches saturated
/// fidelities only. Equals reduced_margin when `saturated` is empty.
MultiIndexSet modified_reduced_margin(const MultiIndexSet& set, const SaturatedSet& saturated, std::size_t n_model);

/// Minimal set B, disjoint from `set` and excluding mu, with set + B + {mu} admissible.
/// Throws std::invalid_argument if mu is already a member.
MultiIndexSet backfill_set(const MultiIndexSet& set, const MultiIndex& mu);

/// Parameter parts of members whose fidelity part equals `fidelity`.
MultiIndexSet restrict_to_fidelity(const MultiIndexSet& set, const MultiIndex& fidelity);

/// Fidelity parts of all members.
MultiIndexSet active_fidelities(const MultiIndexSet& set, std::size_t n_model);

/// {beta : |beta|_1 <= dim + w}, the isotropic Smolyak set.
MultiIndexSet smolyak_set(std::size_t dim, int w);

}  // namespace pmisc
