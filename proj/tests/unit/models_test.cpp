#include <doctest.h>

#include <stdexcept>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "pmisc/combiner.hpp"
#include "pmisc/models.hpp"
#include "test_models.hpp"

using namespace pmisc;
using MI = MultiIndex;

TEST_CASE("noisy Gaussian peak") {
  CHECK(genz_noiseless(std::vector<double>{0.5, 0.5}) == 1.0);
  CHECK(genz_noiseless(std::vector<double>{0.0, 0.5}) == doctest::Approx(std::exp(-0.119822)).epsilon(1e-6));
  CHECK(genz_noiseless(std::vector<double>{0.0, 0.5}) == doctest::Approx(0.887080).epsilon(1e-5));
  const Genz2dgpNoisy m(42);
  const std::vector<double> y{0.3, 0.8};
  CHECK(m.evaluate(MI{2}, y) == m.evaluate(MI{2}, y));
  CHECK(m.cost(MI{1}) == 10.0);
  CHECK(m.cost(MI{3}) == 1000.0);
  CHECK(m.cost(MI{5}) / m.cost(MI{4}) == doctest::Approx(10.0));
  CHECK(m.evaluate(MI{1}, y) != Genz2dgpNoisy(43).evaluate(MI{1}, y));
  CHECK_THROWS_AS(genz_eval(0, y, 1), std::invalid_argument);
}

TEST_CASE("property: Gaussian peak noise has the fidelity's scale") {
  double s1 = 0.0;
  double s2 = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const std::vector<double> y{(i + 0.5) / n, 0.37};
    s1 += std::pow(genz_noise_sample(1, y, 9), 2);
    s2 += std::pow(genz_eval(2, y, 9) - genz_noiseless(y), 2);
  }
  CHECK(std::sqrt(s1 / n) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::sqrt(s2 / n) == doctest::Approx(1e-4).epsilon(0.05));
}

TEST_CASE("parabolic hierarchy") {
  CHECK(parabolic_cost(3) == doctest::Approx(10.0));
  CHECK(parabolic_cost(6) == doctest::Approx(100.0));
  for (int a = 1; a < 6; ++a) CHECK(parabolic_cost(a + 1) > parabolic_cost(a));
  const std::vector<double> mid{0.5, 0.5};
  const double q2 = parabolic_eval(2, mid);
  const double q5 = parabolic_eval(5, mid);
  const double q6 = parabolic_eval(6, mid);
  CHECK(std::abs(q6 - q5) < std::abs(q6 - q2));
  CHECK(parabolic_eval(3, mid) == parabolic_eval(3, mid));
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      CHECK(std::isfinite(parabolic_eval(1, std::vector<double>{i / 10.0, j / 10.0})));
    }
  }
  CHECK_THROWS_AS(parabolic_eval(7, mid), std::invalid_argument);
}

TEST_CASE("fixed fidelity view") {
  const Genz2dgpNoisy m(1);
  const FixedFidelity f(m, MI{3});
  CHECK(f.fidelity_dims() == 0);
  CHECK(f.cost(MI{}) == 1000.0);
  const std::vector<double> y{0.1, 0.2};
  CHECK(f.evaluate(MI{}, y) == m.evaluate(MI{3}, y));
}

TEST_CASE("evaluation cache") {
  std::atomic<int> calls{0};
  testing::FunctionModel model(1, 1, [&](const MI&, std::span<const double> y) {
    ++calls;
    return y[0] * 2.0;
  });
  EvalCache cache;
  const std::vector<double> y{0.25};
  const auto first = cache.get_or_eval(model, MI{1}, y);
  CHECK_FALSE(first.was_hit);
  const auto second = cache.get_or_eval(model, MI{1}, y);
  CHECK(second.was_hit);
  CHECK(second.value == first.value);
  CHECK(calls == 1);
  CHECK(cache.total_cost() == 10.0);
  CHECK(cache.points_per_fidelity().at(MI{1}) == 1);

  // Nested refinement re-requests the coarse points for free.
  TermStore store(model, cache, std::make_shared<NodeTable>(KnotFamily::symmetric_leja, LevelToKnots::two_step));
  store.term(MI{1, 2});
  const double before = cache.total_cost();
  const int calls_before = calls;
  const auto& coarse = store.nodes().level(2).points;
  for (double x : coarse) CHECK(cache.get_or_eval(model, MI{1}, std::vector<double>{x}).was_hit);
  store.term(MI{1, 3});
  CHECK(cache.total_cost() - before == doctest::Approx(20.0));
  CHECK(calls - calls_before == 2);
}

TEST_CASE("persisted cache skips solves but keeps the ledger") {
  const auto path = std::filesystem::temp_directory_path() / "pmisc_cache_test.bin";
  std::filesystem::remove(path);
  std::atomic<int> calls{0};
  testing::FunctionModel model(1, 1, [&](const MI&, std::span<const double> y) {
    ++calls;
    return y[0] + 1.0;
  });
  double v1 = 0.0;
  {
    EvalCache cache(path);
    REQUIRE_FALSE(cache.degraded());
    v1 = cache.get_or_eval(model, MI{2}, std::vector<double>{0.75}).value;
  }
  EvalCache again(path);
  const auto r = again.get_or_eval(model, MI{2}, std::vector<double>{0.75});
  CHECK(r.value == v1);
  CHECK(calls == 1);
  CHECK(again.total_cost() == 100.0);
  std::filesystem::remove(path);
}

TEST_CASE("unwritable cache file degrades to memory") {
  EvalCache cache("/nonexistent_dir_for_pmisc/cache.bin");
  CHECK(cache.degraded());
  CHECK_FALSE(cache.warning().empty());
}
