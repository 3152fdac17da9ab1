#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "pmisc/metrics.hpp"

using namespace pmisc;

namespace {

std::vector<double> column(const Points& p, std::size_t j, double shift = 0.0) {
  std::vector<double> out;
  for (const auto& x : p) out.push_back(x[j] + shift);
  return out;
}

}  // namespace

TEST_CASE("monte carlo points") {
  const auto a = mc_points(100, 3, 5);
  const auto b = mc_points(200, 3, 5);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (const auto& p : a) {
    for (double v : p) CHECK((v > 0.0 && v < 1.0));
  }
  CHECK(mc_points(10, 2, 6)[0] != a[0]);
}

TEST_CASE("L2 error") {
  MetricConfig cfg;
  const BatchFn zero = [](const Points& p) { return std::vector<double>(p.size(), 0.0); };
  const BatchFn shift = [](const Points& p) { return std::vector<double>(p.size(), -0.3); };
  const BatchFn y1 = [](const Points& p) { return column(p, 0); };
  CHECK(l2_error_mc(y1, y1, 2, cfg) == 0.0);
  CHECK(l2_error_mc(zero, shift, 2, cfg) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(l2_error_mc(y1, zero, 2, cfg) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(0.02));
}

TEST_CASE("H1 error") {
  MetricConfig cfg;
  const BatchFn zero = [](const Points& p) { return std::vector<double>(p.size(), 0.0); };
  const BatchFn y1 = [](const Points& p) { return column(p, 0); };
  CHECK(h1_error_mc(y1, y1, 2, cfg) == 0.0);
  CHECK(h1_error_mc(y1, zero, 2, cfg) == doctest::Approx(std::sqrt(1.0 / 3 + 1)).epsilon(0.02));
  const BatchFn smooth = [](const Points& p) {
    std::vector<double> out;
    for (const auto& x : p) out.push_back(std::sin(3 * x[0]) * std::exp(x[1]));
    return out;
  };
  MetricConfig half = cfg;
  half.fd_step = cfg.fd_step / 2;
  const double a = h1_error_mc(smooth, zero, 2, cfg);
  const double b = h1_error_mc(smooth, zero, 2, half);
  CHECK(std::abs(a - b) / a < 0.005);
  MetricConfig bad = cfg;
  bad.fd_step = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("kernel density estimate") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  std::vector<double> s(100000);
  for (double& v : s) v = n01(rng);
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(-8.0 + 16.0 * i / 400);
  const auto pdf = kde_pdf(s, grid);
  double integral = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) integral += 0.5 * (pdf[i] + pdf[i - 1]) * (grid[i] - grid[i - 1]);
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
  CHECK(pdf[200] == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi)).epsilon(0.05));

  const std::vector<double> same(50, 0.3);
  std::vector<double> g2;
  for (int i = 0; i <= 100; ++i) g2.push_back(i / 100.0);
  const auto p2 = kde_pdf(same, g2);
  CHECK(std::max_element(p2.begin(), p2.end()) - p2.begin() == 30);
  CHECK_THROWS_AS(kde_pdf(std::vector<double>(5, 1.0), g2), std::invalid_argument);
}

TEST_CASE("two-sample KS statistic") {
  const std::vector<double> a{0.1, 0.4, 0.7};
  CHECK(ks2(a, a) == 0.0);
  CHECK(ks2(std::vector<double>{0.0}, std::vector<double>{1.0}) == 1.0);
  const auto p = mc_points(10000, 1, 3);
  CHECK(ks2(column(p, 0), column(p, 0, 0.5)) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(ks2(column(p, 0), column(p, 0, 0.5)) - 0.5) < 0.05);
  CHECK_THROWS_AS(ks2(std::vector<double>{}, a), std::invalid_argument);
}
