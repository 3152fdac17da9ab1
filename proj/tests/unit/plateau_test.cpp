#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

#include "pmisc/plateau.hpp"

using namespace pmisc;

namespace {

struct OracleFit {
  int kappa = 0;
  Eigen::Vector2d left, right;
};

// Independent oracle: QR least squares for every split.
OracleFit oracle_fit(const std::vector<int>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  OracleFit best;
  double best_sse = 0.0;
  bool have = false;
  for (Eigen::Index s = 2; s + 2 <= n; ++s) {
    double sse = 0.0;
    Eigen::Vector2d coef[2];
    for (int part = 0; part < 2; ++part) {
      const Eigen::Index start = part == 0 ? 0 : s;
      const Eigen::Index len = part == 0 ? s : n - s;
      Eigen::MatrixXd a(len, 2);
      Eigen::VectorXd b(len);
      for (Eigen::Index i = 0; i < len; ++i) {
        a(i, 0) = x[static_cast<std::size_t>(start + i)];
        a(i, 1) = 1.0;
        b(i) = y[static_cast<std::size_t>(start + i)];
      }
      coef[part] = a.colPivHouseholderQr().solve(b);
      sse += (a * coef[part] - b).squaredNorm();
    }
    if (!have || sse < best_sse - kChangePointTieTol * (1.0 + std::abs(best_sse))) {
      have = true;
      best_sse = sse;
      best = {x[static_cast<std::size_t>(s)], coef[0], coef[1]};
    }
  }
  return best;
}

}  // namespace

TEST_CASE("change point on two exact lines") {
  std::vector<int> x(12);
  std::vector<double> y(12);
  for (int i = 0; i < 12; ++i) {
    x[i] = i;
    y[i] = i < 5 ? -i : -5.0;
  }
  const auto f = fit_change_point(x, y);
  REQUIRE(f);
  CHECK(f->kappa == 5);
  CHECK(f->m0 == doctest::Approx(-1.0));
  CHECK(f->m1 == doctest::Approx(0.0).scale(1.0));
  CHECK(f->sse == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("change point degenerate inputs") {
  std::vector<int> x{3, 4, 5, 6, 7, 8};
  std::vector<double> line{-3, -4, -5, -6, -7, -8};
  const auto f = fit_change_point(x, line);
  REQUIRE(f);
  CHECK(f->kappa == 5);  // smallest split leaving two points on the left
  std::vector<double> flat(6, 2.0);
  const auto g = fit_change_point(x, flat);
  CHECK(g->m0 == 0.0);
  CHECK(g->m1 == 0.0);
  CHECK(g->c0 == 2.0);
  CHECK(g->c1 == 2.0);
  CHECK_FALSE(fit_change_point(std::vector<int>{1, 2, 3}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("property: change point matches the QR oracle") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + trial % 20;
    std::vector<int> x(n);
    std::vector<double> y(n);
    const int k = n / 2;
    for (int i = 0; i < n; ++i) {
      x[i] = 2 + i;
      y[i] = (i < k ? -0.8 * i : -0.8 * k - 0.01 * (i - k)) + noise(rng);
    }
    const auto f = fit_change_point(x, y);
    const auto o = oracle_fit(x, y);
    REQUIRE(f);
    CHECK(f->kappa == o.kappa);
    CHECK(f->m0 == doctest::Approx(o.left(0)).epsilon(1e-10).scale(1.0));
    CHECK(f->c0 == doctest::Approx(o.left(1)).epsilon(1e-10).scale(1.0));
    CHECK(f->m1 == doctest::Approx(o.right(0)).epsilon(1e-10).scale(1.0));
    CHECK(f->c1 == doctest::Approx(o.right(1)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("plateau detection") {
  PlateauParams p;
  Envelope decay;
  for (int i = 0; i <= 12; ++i) decay.values.push_back(std::pow(10.0, -i));
  const auto r = detect_plateau(decay, p);
  CHECK(r.applicable);
  CHECK_FALSE(r.is_plateau);
  CHECK(r.level == 0.0);

  Envelope flat;
  for (int i = 0; i <= 14; ++i) flat.values.push_back(i < 5 ? std::pow(10.0, -0.5 * i) : 4e-3);
  const auto s = detect_plateau(flat, p);
  CHECK(s.is_plateau);
  CHECK(s.kappa == 5);
  CHECK(s.level == doctest::Approx(4e-3).epsilon(1e-9));

  Envelope one{{1.0}};
  const auto t = detect_plateau(one, p);
  CHECK_FALSE(t.applicable);
  CHECK_FALSE(t.is_plateau);
  CHECK(t.level == 0.0);
}

TEST_CASE("plateau needs a long enough tail") {
  PlateauParams p;
  Envelope e;
  for (int i = 0; i <= 10; ++i) e.values.push_back(i < 6 ? std::pow(10.0, -0.5 * i) : 1e-3);
  // Window ends at 8; a plateau starting at 6 leaves 2 <= min_length points.
  CHECK_FALSE(detect_plateau(e, p).is_plateau);
}

TEST_CASE("plateau parameters validate") {
  PlateauParams p;
  p.max_slope = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = PlateauParams{};
  p.burn_in = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("plateau CSV") {
  std::ostringstream os;
  PlateauRecord rec{4, PlateauReport{true, 5, -1, 0, 0, -2, 0.01, true}};
  write_plateau_csv(os, std::span<const PlateauRecord>(&rec, 1));
  CHECK(os.str() == "iteration,kappa,m0,c0,m1,c1,plateau_level,is_plateau\n4,5,-1,0,0,-2,0.01,1\n");
}
