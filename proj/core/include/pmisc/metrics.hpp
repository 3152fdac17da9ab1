#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pmisc {

struct MetricConfig {
  std::size_t samples = 10000;
  std::size_t ks_samples = 1000000;
  std::uint64_t seed = 20240601;
  double fd_step = 1e-4;

  /// Throws std::invalid_argument when samples < 2 or fd_step is outside (0, 1e-2).
  void validate() const;
};

using Points = std::vector<std::vector<double>>;
/// Vectorised evaluation of a function on [0,1]^n.
using BatchFn = std::function<std::vector<double>(const Points&)>;

/// i.i.d. uniform points on [0,1]^dim; point i depends only on (seed, i).
Points mc_points(std::size_t count, std::size_t dim, std::uint64_t seed);

/// Each point followed by its +h/-h neighbours per dimension, after clamping
/// the point into [h, 1-h]^dim. Block size is 1 + 2 dim.
Points fd_stencil(const Points& points, double h);

double l2_from_values(std::span<const double> a, std::span<const double> b);
/// Values laid out as produced by fd_stencil.
double h1_from_values(std::span<const double> a, std::span<const double> b, std::size_t dim, double h);

double l2_error_mc(const BatchFn& a, const BatchFn& b, std::size_t dim, const MetricConfig& cfg);
double h1_error_mc(const BatchFn& a, const BatchFn& b, std::size_t dim, const MetricConfig& cfg);

/// Gaussian KDE with Silverman bandwidth 1.06 sigma n^(-1/5). Needs >= 10 samples.
std::vector<double> kde_pdf(std::span<const double> samples, std::span<const double> grid);
double silverman_bandwidth(std::span<const double> samples);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_A - F_B|.
double ks2(std::span<const double> a, std::span<const double> b);

}  // namespace pmisc
