#include "pmisc/tensor.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace pmisc {

std::vector<double> barycentric_weights(std::span<const double> points) {
  const std::size_t m = points.size();
  if (m == 0) throw std::invalid_argument("barycentric_weights: no points");
  std::vector<double> w(m, 1.0);
  // 4 = 1 / capacity of [0,1]; keeps the products near unit magnitude.
  for (std::size_t j = 0; j < m; ++j) {
    double prod = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      const double d = points[j] - points[k];
      if (d == 0.0) throw std::invalid_argument("barycentric_weights: duplicate points");
      prod *= 4.0 * d;
    }
    w[j] = 1.0 / prod;
  }
  return w;
}

void lagrange_basis(std::span<const double> points, std::span<const double> weights, double y, std::span<double> out) {
  const std::size_t m = points.size();
  double denom = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double d = y - points[k];
    if (d == 0.0) {
      for (std::size_t j = 0; j < m; ++j) out[j] = 0.0;
      out[k] = 1.0;
      return;
    }
    out[k] = weights[k] / d;
    denom += out[k];
  }
  for (std::size_t k = 0; k < m; ++k) out[k] /= denom;
}

double barycentric_eval(std::span<const double> points, std::span<const double> weights,
                        std::span<const double> values, double y) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double d = y - points[k];
    if (d == 0.0) return values[k];
    const double t = weights[k] / d;
    num += t * values[k];
    den += t;
  }
  return num / den;
}

double lagrange_eval_1d(std::span<const double> points, std::span<const double> values, double y) {
  if (points.size() != values.size() || points.empty()) {
    throw std::invalid_argument("lagrange_eval_1d: points and values must have the same non-zero length");
  }
  const auto w = barycentric_weights(points);
  return barycentric_eval(points, w, values, y);
}

double shifted_chebyshev(int k, double y) {
  const double t = 2.0 * y - 1.0;
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int i = 1; i < k; ++i) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> chebyshev_vandermonde(std::span<const double> points) {
  const std::size_t m = points.size();
  std::vector<double> v(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = 2.0 * points[k] - 1.0;
    double prev = 1.0;
    double cur = t;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == 0) {
        v[k * m] = 1.0;
      } else if (j == 1) {
        v[k * m + 1] = t;
      } else {
        const double next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
        v[k * m + j] = cur;
      }
    }
  }
  return v;
}

std::vector<double> chebyshev_vandermonde_inverse(std::span<const double> points) {
  const std::size_t m = points.size();
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) throw std::invalid_argument("chebyshev_vandermonde_inverse: duplicate points");
    }
  }
  const auto v = chebyshev_vandermonde(points);
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> V(v.data(), n, n);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> inv = V.fullPivLu().inverse();
  return std::vector<double>(inv.data(), inv.data() + m * m);
}

std::vector<double> quad_weights_1d(std::span<const double> points) {
  const std::size_t m = points.size();
  if (m == 0) throw std::invalid_argument("quad_weights_1d: no points");
  const auto inv = chebyshev_vandermonde_inverse(points);
  // Integral of T_k(2y-1) over [0,1]: 0 for odd k, 1/(1-k^2) for even k.
  std::vector<double> moments(m, 0.0);
  for (std::size_t k = 0; k < m; k += 2) moments[k] = 1.0 / (1.0 - static_cast<double>(k * k));
  std::vector<double> w(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) w[i] += inv[j * m + i] * moments[j];
  }
  return w;
}

std::size_t TensorGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

std::vector<double> TensorGrid::point(std::size_t flat) const {
  std::vector<double> y(axes.size());
  for (std::size_t d = axes.size(); d-- > 0;) {
    const std::size_t m = axes[d].size();
    y[d] = axes[d][flat % m];
    flat /= m;
  }
  return y;
}

std::vector<std::vector<double>> TensorGrid::points() const {
  std::vector<std::vector<double>> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

double tensor_interp_eval(const TensorGrid& grid, std::span<const double> values, std::span<const double> y) {
  if (values.size() != grid.size()) throw std::invalid_argument("tensor_interp_eval: table size does not match grid");
  if (y.size() != grid.dims()) throw std::invalid_argument("tensor_interp_eval: point dimension mismatch");
  std::vector<double> work(values.begin(), values.end());
  std::size_t len = work.size();
  for (std::size_t d = grid.dims(); d-- > 0;) {
    const auto& pts = grid.axes[d];
    const auto w = barycentric_weights(pts);
    std::vector<double> basis(pts.size());
    lagrange_basis(pts, w, y[d], basis);
    const std::size_t m = pts.size();
    const std::size_t outer = len / m;
    for (std::size_t o = 0; o < outer; ++o) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) acc += work[o * m + k] * basis[k];
      work[o] = acc;
    }
    len = outer;
  }
  return work[0];
}

const LevelData& NodeTable::level(int level) const {
  if (level < 1) throw std::invalid_argument("NodeTable: level must be >= 1");
  std::lock_guard lock(mutex_);
  const auto idx = static_cast<std::size_t>(level - 1);
  while (levels_.size() <= idx) levels_.push_back(nullptr);
  if (!levels_[idx]) {
    auto data = std::make_unique<LevelData>();
    data->level = level;
    data->points = knots_1d(family_, level_to_knots(rule_, level));
    data->bary = barycentric_weights(data->points);
    data->quad = quad_weights_1d(data->points);
    data->cheb_inverse = chebyshev_vandermonde_inverse(data->points);
    levels_[idx] = std::move(data);
  }
  return *levels_[idx];
}

TensorGrid NodeTable::grid(const MultiIndex& levels) const {
  TensorGrid g;
  g.axes.reserve(levels.size());
  for (int l : levels.entries()) g.axes.push_back(level(l).points);
  return g;
}

}  // namespace pmisc
