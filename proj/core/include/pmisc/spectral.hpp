#pragma once

#include <map>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "pmisc/combiner.hpp"
#include "pmisc/knots.hpp"
#include "pmisc/multi_index.hpp"

namespace pmisc {

/// Degree multi-index p in N_0^n (zero-based, unlike level indices).
using Degree = std::vector<int>;

/// Coefficients in the basis prod_j T_{p_j}(2 y_j - 1).
struct SpectralExpansion {
  std::map<Degree, double> coeffs;

  double evaluate(std::span<const double> y) const;
  int max_total_degree() const;
};

/// Tail maximum of |coefficients| by total degree, e(0..k_e).
struct Envelope {
  std::vector<double> values;

  int k_e() const { return static_cast<int>(values.size()) - 1; }
};

/// Union over beta of the boxes prod_j {0..m(beta_j)-1}.
std::set<Degree> poly_degree_set(const MultiIndexSet& levels, LevelToKnots rule);

/// Exact change of basis of a single-fidelity combination interpolant
/// (n_model() == 0). Every degree of the exactness set is present.
SpectralExpansion to_spectral(const Surrogate& s);

/// Relative floor applied to envelope entries.
inline constexpr double kEnvelopeFloor = 1e-16;

Envelope envelope(const SpectralExpansion& x);

void write_envelope_csv(std::ostream& os, const Envelope& e);
void write_coeffs_csv(std::ostream& os, const SpectralExpansion& x, std::size_t n_param);

}  // namespace pmisc
