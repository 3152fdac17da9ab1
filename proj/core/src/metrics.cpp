#include "pmisc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pmisc/random.hpp"

namespace pmisc {

void MetricConfig::validate() const {
  if (samples < 2) throw std::invalid_argument("metrics: samples must be >= 2");
  if (ks_samples < 2) throw std::invalid_argument("metrics: ks_samples must be >= 2");
  if (!(fd_step > 0.0 && fd_step < 1e-2)) throw std::invalid_argument("metrics: fd_step must lie in (0, 1e-2)");
}

Points mc_points(std::size_t count, std::size_t dim, std::uint64_t seed) {
  Points out(count, std::vector<double>(dim));
  const std::uint64_t base = rng::splitmix64(seed ^ 0x6d657472696373ULL);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t row = rng::mix(base, static_cast<std::uint64_t>(i));
    for (std::size_t j = 0; j < dim; ++j) out[i][j] = rng::to_open_unit(rng::mix(row, static_cast<std::uint64_t>(j)));
  }
  return out;
}

Points fd_stencil(const Points& points, double h) {
  Points out;
  if (points.empty()) return out;
  const std::size_t dim = points.front().size();
  out.reserve(points.size() * (1 + 2 * dim));
  for (const auto& p : points) {
    std::vector<double> c(p);
    for (double& v : c) v = std::clamp(v, h, 1.0 - h);
    out.push_back(c);
    for (std::size_t j = 0; j < dim; ++j) {
      auto plus = c;
      auto minus = c;
      plus[j] += h;
      minus[j] -= h;
      out.push_back(std::move(plus));
      out.push_back(std::move(minus));
    }
  }
  return out;
}

double l2_from_values(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("l2_from_values: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double h1_from_values(std::span<const double> a, std::span<const double> b, std::size_t dim, double h) {
  const std::size_t block = 1 + 2 * dim;
  if (a.size() != b.size() || a.empty() || a.size() % block != 0) {
    throw std::invalid_argument("h1_from_values: values do not match the stencil layout");
  }
  const std::size_t n = a.size() / block;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* pa = a.data() + i * block;
    const double* pb = b.data() + i * block;
    const double d0 = pa[0] - pb[0];
    acc += d0 * d0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double dp = pa[1 + 2 * j] - pb[1 + 2 * j];
      const double dm = pa[2 + 2 * j] - pb[2 + 2 * j];
      const double g = (dp - dm) / (2.0 * h);
      acc += g * g;
    }
  }
  return std::sqrt(acc / static_cast<double>(n));
}

double l2_error_mc(const BatchFn& a, const BatchFn& b, std::size_t dim, const MetricConfig& cfg) {
  cfg.validate();
  const auto pts = mc_points(cfg.samples, dim, cfg.seed);
  return l2_from_values(a(pts), b(pts));
}

double h1_error_mc(const BatchFn& a, const BatchFn& b, std::size_t dim, const MetricConfig& cfg) {
  cfg.validate();
  const auto pts = fd_stencil(mc_points(cfg.samples, dim, cfg.seed), cfg.fd_step);
  return h1_from_values(a(pts), b(pts), dim, cfg.fd_step);
}

double silverman_bandwidth(std::span<const double> samples) {
  const auto n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  const double sigma = std::sqrt(var / (n - 1.0));
  return 1.06 * sigma * std::pow(n, -0.2);
}

std::vector<double> kde_pdf(std::span<const double> samples, std::span<const double> grid) {
  if (samples.size() < 10) throw std::invalid_argument("kde_pdf: at least 10 samples required");
  double h = silverman_bandwidth(samples);
  if (!(h > 0.0)) {
    // Degenerate sample: fall back to the grid resolution.
    const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
    h = grid.size() > 1 ? (*hi - *lo) / static_cast<double>(grid.size() - 1) : 1.0;
    if (!(h > 0.0)) h = 1.0;
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  const double reach = 40.0 * h;  // exp(-800) underflows
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
    const auto end = std::upper_bound(it, sorted.end(), x + reach);
    double acc = 0.0;
    for (; it != end; ++it) {
      const double u = (x - *it) / h;
      acc += std::exp(-0.5 * u * u);
    }
    out[g] = acc * norm;
  }
  return out;
}

double ks2(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks2: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto na = static_cast<double>(sa.size());
  const auto nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace pmisc
