#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "pmisc/knots.hpp"
#include "pmisc/multi_index.hpp"

namespace pmisc {

/// Barycentric weights (second form) for distinct points; scaled so that
/// products stay in range. Throws std::invalid_argument on duplicate points.
std::vector<double> barycentric_weights(std::span<const double> points);

/// Barycentric evaluation with precomputed weights.
double barycentric_eval(std::span<const double> points, std::span<const double> weights,
                        std::span<const double> values, double y);

/// Lagrange basis values l_k(y) for all k, using precomputed weights.
void lagrange_basis(std::span<const double> points, std::span<const double> weights, double y,
                    std::span<double> out);

/// Value at y of the polynomial interpolating (points, values).
double lagrange_eval_1d(std::span<const double> points, std::span<const double> values, double y);

/// Chebyshev-Vandermonde matrix V(k, j) = T_j(2 x_k - 1), row-major, n x n.
std::vector<double> chebyshev_vandermonde(std::span<const double> points);

/// Inverse of the Chebyshev-Vandermonde matrix at the points, row-major.
/// Row j maps nodal values to the coefficient of T_j(2y - 1).
std::vector<double> chebyshev_vandermonde_inverse(std::span<const double> points);

/// Value of T_k(2y - 1).
double shifted_chebyshev(int k, double y);

/// w_k = integral over [0,1] of the k-th Lagrange basis polynomial.
std::vector<double> quad_weights_1d(std::span<const double> points);

/// Tensor product of 1D knot lists; flattened points are row-major (last
/// dimension fastest).
struct TensorGrid {
  std::vector<std::vector<double>> axes;

  std::size_t dims() const { return axes.size(); }
  std::size_t size() const;
  std::vector<double> point(std::size_t flat) const;
  std::vector<std::vector<double>> points() const;
};

/// Nested 1D barycentric contraction of a row-major value table.
double tensor_interp_eval(const TensorGrid& grid, std::span<const double> values, std::span<const double> y);

/// Cached per-level data for one knot family and level-to-knots rule.
struct LevelData {
  int level = 0;
  std::vector<double> points;
  std::vector<double> bary;
  std::vector<double> quad;
  std::vector<double> cheb_inverse;  // row-major m x m
};

/// Write-once cache of 1D collocation data indexed by level.
class NodeTable {
 public:
  NodeTable(KnotFamily family, LevelToKnots rule) : family_(family), rule_(rule) {}

  KnotFamily family() const { return family_; }
  LevelToKnots rule() const { return rule_; }
  std::size_t count(int level) const { return level_to_knots(rule_, level); }

  /// Stable reference for the lifetime of the table.
  const LevelData& level(int level) const;

  TensorGrid grid(const MultiIndex& levels) const;

 private:
  KnotFamily family_;
  LevelToKnots rule_;
  mutable std::mutex mutex_;
  mutable std::deque<std::unique_ptr<LevelData>> levels_;
};

}  // namespace pmisc
