#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "pmisc/spectral.hpp"

namespace pmisc {

struct PlateauParams {
  int burn_in = 2;
  int burn_out = 2;
  int min_length = 3;
  double max_slope = 0.1;

  /// Throws std::invalid_argument on negative counts or a non-positive slope.
  void validate() const;
};

/// Two-segment least-squares fit: y ~ m0 x + c0 for x < kappa and
/// y ~ m1 x + c1 for x >= kappa.
struct ChangePointFit {
  int kappa = 0;
  double m0 = 0.0;
  double c0 = 0.0;
  double m1 = 0.0;
  double c1 = 0.0;
  double sse = 0.0;
};

/// Relative SSE difference below which two splits count as equal.
inline constexpr double kChangePointTieTol = 1e-12;

/// Exhaustive scan over splits leaving at least two points per segment. Ties go
/// to the smallest kappa. Returns nullopt for fewer than four points.
std::optional<ChangePointFit> fit_change_point(std::span<const int> x, std::span<const double> y);

struct PlateauReport {
  bool applicable = false;
  int kappa = 0;
  double m0 = 0.0;
  double c0 = 0.0;
  double m1 = 0.0;
  double c1 = 0.0;
  double level = 0.0;
  bool is_plateau = false;
};

/// Fits log10 e(i) on i in [burn_in, k_e - burn_out].
PlateauReport detect_plateau(const Envelope& e, const PlateauParams& params);

struct PlateauRecord {
  int iteration = 0;
  PlateauReport report;
};

void write_plateau_csv(std::ostream& os, std::span<const PlateauRecord> records);

}  // namespace pmisc
