#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <stdexcept>

#include "pmisc/knots.hpp"

using namespace pmisc;

namespace {

// Greedy maximisation of prod |x - x_j| on a fine grid over [-1, 1], adding the
// mirror of every new point, mapped to [0, 1].
std::vector<double> brute_force_leja(std::size_t count) {
  constexpr int kGrid = 400000;
  std::vector<double> seq{0.0, 1.0, -1.0};
  while (seq.size() < count) {
    double best = -1.0;
    double arg = 0.0;
    for (int i = 0; i <= kGrid; ++i) {
      const double x = -1.0 + 2.0 * i / kGrid;
      double p = 1.0;
      for (double s : seq) p *= std::abs(x - s);
      if (p > best) {
        best = p;
        arg = x;
      }
    }
    // Ties between x and -x go to the positive point first.
    seq.push_back(std::abs(arg));
    seq.push_back(-std::abs(arg));
  }
  seq.resize(count);
  for (double& v : seq) v = 0.5 * (v + 1.0);
  return seq;
}

}  // namespace

TEST_CASE("level_to_knots rules") {
  CHECK(level_to_knots(LevelToKnots::doubling, 4) == 9);
  CHECK(level_to_knots(LevelToKnots::linear, 1) == 1);
  CHECK(level_to_knots(LevelToKnots::two_step, 4) == 7);
  CHECK(level_to_knots(LevelToKnots::doubling, 1) == 1);
  CHECK(level_to_knots(LevelToKnots::doubling, 2) == 3);
  CHECK_THROWS_AS(level_to_knots(LevelToKnots::linear, 0), std::invalid_argument);
  for (auto rule : {LevelToKnots::linear, LevelToKnots::two_step, LevelToKnots::doubling}) {
    for (int l = 1; l < 10; ++l) CHECK(level_to_knots(rule, l + 1) > level_to_knots(rule, l));
  }
}

TEST_CASE("knot families") {
  CHECK(knots_1d(KnotFamily::clenshaw_curtis, 1) == std::vector<double>{0.5});
  const auto cc3 = knots_1d(KnotFamily::clenshaw_curtis, 3);
  REQUIRE(cc3.size() == 3);
  CHECK(cc3[0] == doctest::Approx(0.0));
  CHECK(cc3[1] == doctest::Approx(0.5));
  CHECK(cc3[2] == doctest::Approx(1.0));
  const auto cc5 = knots_1d(KnotFamily::clenshaw_curtis, 5);
  const double c = (1.0 - std::cos(M_PI / 4.0)) / 2.0;
  CHECK(cc5[1] == doctest::Approx(c).epsilon(1e-14));
  CHECK(cc5[3] == doctest::Approx(1.0 - c).epsilon(1e-14));

  const auto l5 = knots_1d(KnotFamily::symmetric_leja, 5);
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(l5[0] == 0.0);
  CHECK(l5[1] == doctest::Approx((1 - s) / 2).epsilon(1e-14));
  CHECK(l5[2] == 0.5);
  CHECK(l5[3] == doctest::Approx((1 + s) / 2).epsilon(1e-14));
  CHECK(l5[4] == 1.0);
  CHECK_THROWS_AS(knots_1d(KnotFamily::symmetric_leja, 0), std::invalid_argument);
}

TEST_CASE("leja sequence matches brute-force maximisation") {
  const auto seq = leja_sequence(13);
  const auto oracle = brute_force_leja(13);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CAPTURE(i);
    CHECK(seq[i] == doctest::Approx(oracle[i]).epsilon(2e-5));
  }
}

TEST_CASE("nestedness") {
  CHECK(is_nested(KnotFamily::clenshaw_curtis, LevelToKnots::doubling, 6));
  CHECK(is_nested(KnotFamily::symmetric_leja, LevelToKnots::two_step, 6));
  CHECK(is_nested(KnotFamily::symmetric_leja, LevelToKnots::linear, 6));
  CHECK_FALSE(is_nested(KnotFamily::clenshaw_curtis, LevelToKnots::linear, 3));
}

TEST_CASE("shared points are bit-identical across sizes") {
  for (auto fam : {KnotFamily::clenshaw_curtis, KnotFamily::symmetric_leja}) {
    const auto small = knots_1d(fam, 5);
    const auto big = knots_1d(fam, 17);
    for (double x : small) CHECK(std::find(big.begin(), big.end(), x) != big.end());
  }
}

TEST_CASE("names round-trip") {
  for (auto f : {KnotFamily::clenshaw_curtis, KnotFamily::symmetric_leja}) CHECK(parse_knot_family(to_string(f)) == f);
  for (auto r : {LevelToKnots::linear, LevelToKnots::two_step, LevelToKnots::doubling}) {
    CHECK(parse_level_to_knots(to_string(r)) == r);
  }
  CHECK_THROWS_AS(parse_knot_family("gauss"), std::invalid_argument);
}
