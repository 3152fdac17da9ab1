#include <doctest.h>

#include <stdexcept>

#include <random>

#include "pmisc/multi_index.hpp"
#include "test_models.hpp"

using namespace pmisc;
using MI = MultiIndex;

TEST_CASE("admissibility") {
  CHECK(is_admissible(MultiIndexSet(2, {{1, 1}})));
  CHECK(is_admissible(MultiIndexSet(2, {{1, 1}, {2, 1}, {1, 2}})));
  CHECK_FALSE(is_admissible(MultiIndexSet(2, {{1, 1}, {2, 2}})));
  CHECK_THROWS_AS(is_admissible(MultiIndexSet(2)), std::invalid_argument);
}

TEST_CASE("margin") {
  CHECK(margin(MultiIndexSet(2, {{1, 1}})) == MultiIndexSet(2, {{2, 1}, {1, 2}}));
  CHECK(margin(MultiIndexSet(2, {{1, 1}, {2, 1}})) == MultiIndexSet(2, {{3, 1}, {1, 2}, {2, 2}}));
  MultiIndexSet simplex(2);
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; a + b <= 4; ++b) simplex.insert(MI{a, b});
  }
  CHECK(margin(simplex) == MultiIndexSet(2, {{1, 4}, {2, 3}, {3, 2}, {4, 1}}));
  CHECK(reduced_margin(simplex) == margin(simplex));
}

TEST_CASE("reduced margin") {
  CHECK(reduced_margin(MultiIndexSet(2, {{1, 1}})) == MultiIndexSet(2, {{2, 1}, {1, 2}}));
  CHECK(reduced_margin(MultiIndexSet(2, {{1, 1}, {2, 1}})) == MultiIndexSet(2, {{3, 1}, {1, 2}}));
  CHECK(reduced_margin(MultiIndexSet(2, {{1, 1}, {2, 1}, {3, 1}})) == MultiIndexSet(2, {{4, 1}, {1, 2}}));
}

TEST_CASE("modified reduced margin") {
  const MultiIndexSet set(2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}});
  CHECK(modified_reduced_margin(set, SaturatedSet(1), 1) == reduced_margin(set));
  const SaturatedSet sat(1, {{1}, {2}});
  const auto mrm = modified_reduced_margin(set, sat, 1);
  CHECK(mrm.contains(MI{3, 3}));
  CHECK_FALSE(reduced_margin(set).contains(MI{3, 3}));
}

TEST_CASE("backfill") {
  const MultiIndexSet set(2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}});
  CHECK(backfill_set(set, MI{3, 3}) == MultiIndexSet(2, {{1, 3}, {2, 3}}));
  CHECK(backfill_set(MultiIndexSet(2, {{1, 1}}), MI{3, 1}) == MultiIndexSet(2, {{2, 1}}));
  CHECK(backfill_set(set, MI{4, 1}).empty());
  CHECK_THROWS_AS(backfill_set(set, MI{1, 1}), std::invalid_argument);
}

TEST_CASE("restriction and active fidelities") {
  CHECK(restrict_to_fidelity(MultiIndexSet(3, {{1, 1, 1}}), MI{1}) == MultiIndexSet(2, {{1, 1}}));
  const MultiIndexSet set(2, {{1, 1}, {1, 2}, {2, 1}});
  CHECK(restrict_to_fidelity(set, MI{1}) == MultiIndexSet(1, {{1}, {2}}));
  CHECK(restrict_to_fidelity(set, MI{3}).empty());
  CHECK(active_fidelities(MultiIndexSet(2, {{1, 1}}), 1) == MultiIndexSet(1, {{1}}));
  CHECK(active_fidelities(MultiIndexSet(2, {{1, 1}, {2, 1}, {1, 2}}), 1) == MultiIndexSet(1, {{1}, {2}}));
  CHECK(active_fidelities(MultiIndexSet(3, {{1, 1, 1}, {2, 1, 1}}), 2) == MultiIndexSet(2, {{1, 1}, {2, 1}}));
}

TEST_CASE("smolyak set sizes") {
  CHECK(smolyak_set(2, 0).size() == 1);
  CHECK(smolyak_set(2, 2).size() == 6);
  CHECK(smolyak_set(3, 1).size() == 4);
  CHECK(is_admissible(smolyak_set(3, 4)));
}

TEST_CASE("index helpers") {
  const MI a{2, 3, 1};
  CHECK(a.to_string() == "2-3-1");
  CHECK(a.total() == 6);
  CHECK(a.forward(2) == MI{2, 3, 2});
  CHECK(a.backward(0) == MI{1, 3, 1});
  CHECK(a.head(1) == MI{2});
  CHECK(a.tail(1) == MI{3, 1});
  CHECK(MI::join(MI{2}, MI{3, 1}) == a);
  CHECK(MI{1, 3}.dominated_by(MI{2, 3}));
  CHECK_FALSE(MI{1, 4}.dominated_by(MI{2, 3}));
}

TEST_CASE("property: margin operations on random admissible sets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto set = testing::random_admissible(rng, dim, 1 + trial % 15);
    REQUIRE(is_admissible(set));
    const auto m = margin(set);
    for (const auto& mu : reduced_margin(set)) {
      CHECK(m.contains(mu));
      auto grown = set;
      grown.insert(mu);
      CHECK(is_admissible(grown));
    }
    for (const auto& mu : m) {
      // The backfill set is exactly the set of missing indices below mu.
      const auto b = backfill_set(set, mu);
      auto grown = set;
      grown.insert(b);
      grown.insert(mu);
      CHECK(is_admissible(grown));
      for (const auto& nu : b) {
        CHECK(nu.dominated_by(mu));
        CHECK_FALSE(set.contains(nu));
      }
      for (const auto& nu : b) {
        auto without = grown;
        without.erase(nu);
        CHECK_FALSE(is_admissible(without));
      }
    }
  }
}
