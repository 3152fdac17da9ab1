#include "pmisc/knots.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pmisc {

std::string_view to_string(KnotFamily family) {
  switch (family) {
    case KnotFamily::clenshaw_curtis: return "clenshaw_curtis";
    case KnotFamily::symmetric_leja: return "symmetric_leja";
  }
  return "unknown";
}

std::string_view to_string(LevelToKnots rule) {
  switch (rule) {
    case LevelToKnots::linear: return "linear";
    case LevelToKnots::two_step: return "two_step";
    case LevelToKnots::doubling: return "doubling";
  }
  return "unknown";
}

KnotFamily parse_knot_family(std::string_view name) {
  if (name == "clenshaw_curtis") return KnotFamily::clenshaw_curtis;
  if (name == "symmetric_leja") return KnotFamily::symmetric_leja;
  throw std::invalid_argument("unknown knot family '" + std::string(name) + "'");
}

LevelToKnots parse_level_to_knots(std::string_view name) {
  if (name == "linear") return LevelToKnots::linear;
  if (name == "two_step") return LevelToKnots::two_step;
  if (name == "doubling") return LevelToKnots::doubling;
  throw std::invalid_argument("unknown level-to-knots rule '" + std::string(name) + "'");
}

std::size_t level_to_knots(LevelToKnots rule, int level) {
  if (level < 1) throw std::invalid_argument("level_to_knots: level must be >= 1");
  if (level == 1) return 1;
  const auto l = static_cast<std::size_t>(level);
  switch (rule) {
    case LevelToKnots::linear: return l;
    case LevelToKnots::two_step: return 2 * (l - 1) + 1;
    case LevelToKnots::doubling:
      if (l > 40) throw std::invalid_argument("level_to_knots: doubling level too large");
      return (std::size_t{1} << (l - 1)) + 1;
  }
  throw std::invalid_argument("level_to_knots: unknown rule");
}

namespace {

// Points in the lower half come from sin^2(theta/2); the upper half mirrors them
// as 1 - x. The angle ratio (j)/(m-1) is invariant under the doubling map
// j -> 2j, m-1 -> 2(m-1), so shared points are bit-identical across sizes.
std::vector<double> clenshaw_curtis(std::size_t m) {
  if (m == 1) return {0.5};
  std::vector<double> pts(m);
  const std::size_t n = m - 1;
  auto lower = [n](std::size_t j) {
    const double s = std::sin(0.5 * std::numbers::pi * (static_cast<double>(j) / static_cast<double>(n)));
    return s * s;
  };
  for (std::size_t j = 0; j < m; ++j) {
    if (2 * j == n) {
      pts[j] = 0.5;
    } else if (2 * j < n) {
      pts[j] = lower(j);
    } else {
      pts[j] = 1.0 - lower(n - j);
    }
  }
  pts.front() = 0.0;
  pts.back() = 1.0;
  return pts;
}

class LejaCache {
 public:
  static constexpr std::size_t kCandidates = 100001;
  static constexpr std::size_t kPrecomputed = 65;

  LejaCache() {
    // Candidates cover [0,1] on the symmetric interval; the objective is even
    // once the emitted set is symmetric, so the search over x >= 0 suffices.
    const std::size_t half = (kCandidates - 1) / 2;
    candidates_.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
      candidates_[k] = std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(kCandidates - 1));
    }
    log_product_.assign(candidates_.size(), 0.0);
    symmetric_ = {0.0, 1.0, -1.0};
    for (double x : symmetric_) absorb(x);
    extend(kPrecomputed);
  }

  std::vector<double> prefix(std::size_t count) {
    std::lock_guard lock(mutex_);
    extend(count);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = to_unit(symmetric_[i]);
    return out;
  }

 private:
  static double to_unit(double x) {
    if (x == 0.0) return 0.5;
    if (x == 1.0) return 1.0;
    if (x == -1.0) return 0.0;
    return 0.5 * (1.0 + x);
  }

  void absorb(double x) {
    for (std::size_t k = 0; k < candidates_.size(); ++k) {
      const double d = std::abs(candidates_[k] - x);
      log_product_[k] += d > 0.0 ? std::log(d) : -1e300;
    }
  }

  double objective(double x) const {
    double acc = 0.0;
    for (double s : symmetric_) acc += std::log(std::abs(x - s));
    return acc;
  }

  // Golden-section search between the grid neighbours of the best candidate;
  // the grid alone is only accurate to about 1e-5.
  double refine(std::size_t best) const {
    double lo = candidates_[std::min(best + 1, candidates_.size() - 1)];
    double hi = candidates_[best == 0 ? 0 : best - 1];
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - r * (hi - lo);
    double b = lo + r * (hi - lo);
    double fa = objective(a);
    double fb = objective(b);
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      if (fa < fb) {
        lo = a;
        a = b;
        fa = fb;
        b = lo + r * (hi - lo);
        fb = objective(b);
      } else {
        hi = b;
        b = a;
        fb = fa;
        a = hi - r * (hi - lo);
        fa = objective(a);
      }
    }
    // The maximum is flat, so finish with Newton steps on the derivative.
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
      double d1 = 0.0;
      double d2 = 0.0;
      for (double s : symmetric_) {
        const double inv = 1.0 / (x - s);
        d1 += inv;
        d2 -= inv * inv;
      }
      const double next = x - d1 / d2;
      if (!(std::abs(next - x) < 1e-6)) break;
      x = next;
    }
    return objective(x) >= objective(candidates_[best]) ? x : candidates_[best];
  }

  void extend(std::size_t count) {
    while (symmetric_.size() < count) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < candidates_.size(); ++k) {
        if (log_product_[k] > log_product_[best]) best = k;
      }
      if (log_product_[best] < -1e299) throw std::runtime_error("Leja sequence exhausted candidate grid");
      const double x = refine(best);
      symmetric_.push_back(x);
      symmetric_.push_back(-x);
      absorb(x);
      absorb(-x);
    }
  }

  std::mutex mutex_;
  std::vector<double> candidates_;
  std::vector<double> log_product_;
  std::vector<double> symmetric_;
};

LejaCache& leja_cache() {
  static LejaCache cache;
  return cache;
}

}  // namespace

std::vector<double> leja_sequence(std::size_t count) { return leja_cache().prefix(count); }

std::vector<double> knots_1d(KnotFamily family, std::size_t m) {
  if (m == 0) throw std::invalid_argument("knots_1d: m must be >= 1");
  if (family == KnotFamily::clenshaw_curtis) return clenshaw_curtis(m);
  auto pts = leja_sequence(m);
  std::sort(pts.begin(), pts.end());
  return pts;
}

bool is_nested(KnotFamily family, LevelToKnots rule, int up_to_level) {
  constexpr double tol = 1e-14;
  for (int l = 1; l < up_to_level; ++l) {
    const auto coarse = knots_1d(family, level_to_knots(rule, l));
    const auto fine = knots_1d(family, level_to_knots(rule, l + 1));
    for (double x : coarse) {
      const bool found = std::any_of(fine.begin(), fine.end(), [x](double f) { return std::abs(f - x) <= tol; });
      if (!found) return false;
    }
  }
  return true;
}

}  // namespace pmisc
