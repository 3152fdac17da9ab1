#include "pmisc/plateau.hpp"

#include <cmath>
#include <stdexcept>

#include "pmisc/csv.hpp"

namespace pmisc {

void PlateauParams::validate() const {
  if (burn_in < 0 || burn_out < 0 || min_length < 0) throw std::invalid_argument("plateau: counts must be >= 0");
  if (!(max_slope > 0.0)) throw std::invalid_argument("plateau: max_slope must be > 0");
}

namespace {

struct Line {
  double m = 0.0;
  double c = 0.0;
  double sse = 0.0;
};

Line ols(std::span<const int> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.m = sxy / sxx;
  l.c = my - l.m * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.m * x[i] + l.c);
    l.sse += r * r;
  }
  return l;
}

}  // namespace

std::optional<ChangePointFit> fit_change_point(std::span<const int> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_change_point: size mismatch");
  const std::size_t n = x.size();
  if (n < 4) return std::nullopt;
  std::optional<ChangePointFit> best;
  for (std::size_t split = 2; split + 2 <= n; ++split) {
    const Line a = ols(x.first(split), y.first(split));
    const Line b = ols(x.subspan(split), y.subspan(split));
    const double sse = a.sse + b.sse;
    if (!best || sse < best->sse - kChangePointTieTol * (1.0 + std::abs(best->sse))) {
      best = ChangePointFit{x[split], a.m, a.c, b.m, b.c, sse};
    }
  }
  return best;
}

PlateauReport detect_plateau(const Envelope& e, const PlateauParams& params) {
  PlateauReport r;
  const int lo = params.burn_in;
  const int hi = e.k_e() - params.burn_out;
  if (hi - lo + 1 < 4) return r;
  std::vector<int> xs;
  std::vector<double> ys;
  for (int i = lo; i <= hi; ++i) {
    xs.push_back(i);
    ys.push_back(std::log10(e.values[static_cast<std::size_t>(i)]));
  }
  const auto fit = fit_change_point(xs, ys);
  r.applicable = true;
  r.kappa = fit->kappa;
  r.m0 = fit->m0;
  r.c0 = fit->c0;
  r.m1 = fit->m1;
  r.c1 = fit->c1;
  r.is_plateau = std::abs(r.m1) <= params.max_slope && hi - r.kappa > params.min_length;
  r.level = r.is_plateau ? std::pow(10.0, r.m1 * r.kappa + r.c1) : 0.0;
  return r;
}

void write_plateau_csv(std::ostream& os, std::span<const PlateauRecord> records) {
  CsvWriter csv(os);
  csv.header({"iteration", "kappa", "m0", "c0", "m1", "c1", "plateau_level", "is_plateau"});
  for (const auto& rec : records) {
    const auto& r = rec.report;
    csv.row(rec.iteration, r.kappa, r.m0, r.c0, r.m1, r.c1, r.level, r.is_plateau);
  }
}

}  // namespace pmisc
