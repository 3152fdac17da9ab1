#include "pmisc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pmisc/csv.hpp"
#include "pmisc/tensor.hpp"

namespace pmisc {

double SpectralExpansion::evaluate(std::span<const double> y) const {
  double total = 0.0;
  for (const auto& [p, c] : coeffs) {
    double phi = c;
    for (std::size_t j = 0; j < p.size(); ++j) phi *= shifted_chebyshev(p[j], y[j]);
    total += phi;
  }
  return total;
}

int SpectralExpansion::max_total_degree() const {
  int k = 0;
  for (const auto& [p, c] : coeffs) k = std::max(k, std::accumulate(p.begin(), p.end(), 0));
  return k;
}

std::set<Degree> poly_degree_set(const MultiIndexSet& levels, LevelToKnots rule) {
  if (!is_admissible(levels)) throw std::invalid_argument("poly_degree_set: set is not admissible");
  std::set<Degree> out;
  const std::size_t n = levels.dim();
  for (const auto& beta : levels) {
    std::vector<int> ext(n);
    for (std::size_t j = 0; j < n; ++j) ext[j] = static_cast<int>(level_to_knots(rule, beta[j]));
    Degree p(n, 0);
    for (;;) {
      out.insert(p);
      std::size_t d = n;
      while (d-- > 0) {
        if (++p[d] < ext[d]) break;
        p[d] = 0;
      }
      if (d == static_cast<std::size_t>(-1)) break;
    }
  }
  return out;
}

SpectralExpansion to_spectral(const Surrogate& s) {
  if (s.n_model() != 0) throw std::invalid_argument("to_spectral: surrogate must be single-fidelity");
  SpectralExpansion x;
  for (const auto& p : poly_degree_set(s.set(), s.nodes().rule())) x.coeffs.emplace(p, 0.0);
  const std::size_t n = s.n_param();
  for (const auto& t : s.terms()) {
    if (t.coeff == 0) continue;
    if (!t.data) throw std::logic_error("to_spectral: incomplete evaluation table");
    const auto cheb = t.data->chebyshev();
    std::vector<int> ext(n);
    for (std::size_t j = 0; j < n; ++j) ext[j] = static_cast<int>(s.nodes().count(t.levels[j]));
    Degree p(n, 0);
    for (std::size_t flat = 0; flat < cheb.size(); ++flat) {
      x.coeffs[p] += t.coeff * cheb[flat];
      std::size_t d = n;
      while (d-- > 0) {
        if (++p[d] < ext[d]) break;
        p[d] = 0;
      }
    }
  }
  return x;
}

Envelope envelope(const SpectralExpansion& x) {
  if (x.coeffs.empty()) throw std::invalid_argument("envelope: empty expansion");
  const int k_e = x.max_total_degree();
  std::vector<double> by_degree(static_cast<std::size_t>(k_e) + 1, 0.0);
  for (const auto& [p, c] : x.coeffs) {
    const auto k = static_cast<std::size_t>(std::accumulate(p.begin(), p.end(), 0));
    by_degree[k] = std::max(by_degree[k], std::abs(c));
  }
  Envelope e;
  e.values.resize(by_degree.size());
  double tail = 0.0;
  for (std::size_t i = by_degree.size(); i-- > 0;) {
    tail = std::max(tail, by_degree[i]);
    e.values[i] = tail;
  }
  const double floor = std::max(e.values[0], std::numeric_limits<double>::min()) * kEnvelopeFloor;
  for (double& v : e.values) v = std::max(v, floor);
  return e;
}

void write_envelope_csv(std::ostream& os, const Envelope& e) {
  CsvWriter csv(os);
  csv.header({"total_degree", "coeff_abs_max"});
  for (std::size_t i = 0; i < e.values.size(); ++i) csv.row(static_cast<int>(i), e.values[i]);
}

void write_coeffs_csv(std::ostream& os, const SpectralExpansion& x, std::size_t n_param) {
  CsvWriter csv(os);
  std::vector<std::string> cols;
  for (std::size_t j = 1; j <= n_param; ++j) cols.push_back("p" + std::to_string(j));
  cols.emplace_back("coeff");
  csv.header(cols);
  for (const auto& [p, c] : x.coeffs) {
    std::vector<std::string> cells;
    for (int k : p) cells.push_back(std::to_string(k));
    cells.push_back(format_real(c));
    csv.row_cells(cells);
  }
}

}  // namespace pmisc
