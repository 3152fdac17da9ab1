#include "pmisc/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pmisc/random.hpp"

namespace pmisc {

double genz_noiseless(std::span<const double> y) {
  const double a = y[0] - 0.5;
  const double b = y[1] - 0.5;
  return std::exp(-kGenzC1 * kGenzC1 * a * a) * std::exp(-kGenzC2 * kGenzC2 * b * b);
}

double genz_noise_sample(int alpha, std::span<const double> y, std::uint64_t seed) {
  std::uint64_t key = rng::mix(rng::splitmix64(seed), static_cast<std::uint64_t>(alpha));
  for (double v : y) key = rng::mix(key, v);
  return rng::standard_normal(key);
}

double genz_eval(int alpha, std::span<const double> y, std::uint64_t seed) {
  if (alpha < 1) throw std::invalid_argument("genz_eval: alpha must be >= 1");
  return genz_noiseless(y) + std::pow(10.0, -2.0 * alpha) * genz_noise_sample(alpha, y, seed);
}

double genz_cost(int alpha) {
  if (alpha < 1) throw std::invalid_argument("genz_cost: alpha must be >= 1");
  return std::pow(10.0, alpha);
}

double Genz2dgpNoisy::evaluate(const MultiIndex& fidelity, std::span<const double> y) const {
  return genz_eval(fidelity[0], y, seed_);
}

namespace {

// Solves a tridiagonal system in place (Thomas algorithm). lower[0] and
// upper[n-1] are ignored.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs, std::vector<double>& scratch) {
  const std::size_t n = diag.size();
  scratch.resize(n);
  double beta = diag[0];
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    scratch[i] = upper[i - 1] / beta;
    beta = diag[i] - lower[i] * scratch[i];
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

double boundary_drive(double t) {
  return (1.0 - std::exp(-t / 0.1)) * (1.0 + 0.1 * std::sin(2.0 * std::numbers::pi * t));
}

}  // namespace

ParabolicSolveStats parabolic_solve(double tolerance, std::span<const double> y, const ParabolicOptions& options) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("parabolic_solve: tolerance must be positive");
  const int cells = options.cells;
  const std::size_t n = static_cast<std::size_t>(cells - 1);
  const double dx = 2.0 / cells;
  const double a0 = options.base_diffusion;
  const double diffusion = 0.1 * a0 + 1.8 * a0 * y[0];
  const double wind_scale = 1.0 + 0.5 * (2.0 * y[1] - 1.0);

  // du/dt = A u + b(t) for the interior nodes x_i = -1 + i dx, i = 1..cells-1.
  std::vector<double> lo(n), di(n), up(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = -1.0 + static_cast<double>(k + 1) * dx;
    const double w = 2.0 * (1.0 - x * x) * wind_scale;
    lo[k] = diffusion / (dx * dx) + w / (2.0 * dx);
    di[k] = -2.0 * diffusion / (dx * dx);
    up[k] = diffusion / (dx * dx) - w / (2.0 * dx);
  }
  auto rhs = [&](const std::vector<double>& u, double t, std::vector<double>& out) {
    const double g = boundary_drive(t);
    for (std::size_t k = 0; k < n; ++k) {
      double v = di[k] * u[k];
      v += k > 0 ? lo[k] * u[k - 1] : lo[k] * g;
      v += k + 1 < n ? up[k] * u[k + 1] : up[k] * g;
      out[k] = v;
    }
  };

  std::vector<double> u(n, 0.0), u_new(n), pred(n), du(n), du_prev(n), du_new(n), scratch;
  std::vector<double> sys_lo(n), sys_di(n), sys_up(n);

  // Trapezoidal step from (u, t) over dt into u_new.
  auto trapezoid = [&](double t, double dt) {
    rhs(u, t, du_new);
    const double g1 = boundary_drive(t + dt);
    for (std::size_t k = 0; k < n; ++k) {
      u_new[k] = u[k] + 0.5 * dt * du_new[k];
      sys_lo[k] = -0.5 * dt * lo[k];
      sys_di[k] = 1.0 - 0.5 * dt * di[k];
      sys_up[k] = -0.5 * dt * up[k];
    }
    u_new[0] += 0.5 * dt * lo[0] * g1;
    u_new[n - 1] += 0.5 * dt * up[n - 1] * g1;
    solve_tridiagonal(sys_lo, sys_di, sys_up, u_new, scratch);
  };

  ParabolicSolveStats stats;
  const double t_end = options.final_time;
  double t = 0.0;
  double dt = 1e-4;
  trapezoid(t, dt);
  u.swap(u_new);
  t += dt;
  ++stats.accepted_steps;
  rhs(u, t, du);
  du_prev.assign(n, 0.0);
  double dt_prev = dt;

  while (t < t_end) {
    if (t + dt > t_end) dt = t_end - t;
    // AB2 predictor with variable step ratio.
    const double r = dt / dt_prev;
    for (std::size_t k = 0; k < n; ++k) {
      pred[k] = u[k] + 0.5 * dt * ((2.0 + r) * du[k] - r * du_prev[k]);
    }
    trapezoid(t, dt);
    double err = 0.0;
    const double scale = 1.0 / (3.0 * (1.0 + dt_prev / dt));
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(u_new[k] - pred[k]) * scale);
    const double factor = err > 0.0 ? 0.9 * std::cbrt(tolerance / err) : 2.0;
    if (err <= tolerance) {
      u.swap(u_new);
      t += dt;
      du_prev.swap(du);
      rhs(u, t, du);
      dt_prev = dt;
      dt *= std::clamp(factor, 0.2, 2.0);
      ++stats.accepted_steps;
    } else {
      dt *= std::clamp(factor, 0.1, 0.9);
      ++stats.rejected_steps;
      if (dt < 1e-12) throw std::runtime_error("parabolic_solve: step size underflow");
    }
  }

  // Linear interpolation of the interior profile at the QoI location.
  const double pos = (options.qoi_x + 1.0) / dx;
  const auto i0 = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i0);
  auto node = [&](std::size_t i) {
    if (i == 0 || i == static_cast<std::size_t>(cells)) return boundary_drive(t_end);
    return u[i - 1];
  };
  stats.qoi = frac == 0.0 ? node(i0) : (1.0 - frac) * node(i0) + frac * node(i0 + 1);
  return stats;
}

double parabolic_eval(int alpha, std::span<const double> y, const ParabolicOptions& options) {
  if (alpha < 1 || alpha > Parabolic1dNoisy::kMaxFidelity) {
    throw std::invalid_argument("parabolic_eval: fidelity must be in 1..6");
  }
  return parabolic_solve(std::pow(10.0, -alpha), y, options).qoi;
}

double parabolic_cost(int alpha) {
  if (alpha < 1 || alpha > Parabolic1dNoisy::kMaxFidelity) {
    throw std::invalid_argument("parabolic_cost: fidelity must be in 1..6");
  }
  return std::pow(10.0, alpha / 3.0);
}

double Parabolic1dNoisy::evaluate(const MultiIndex& fidelity, std::span<const double> y) const {
  return parabolic_eval(fidelity[0], y, options_);
}

EvalKey make_eval_key(const MultiIndex& fidelity, std::span<const double> y) {
  EvalKey key{fidelity, {}};
  key.bits.reserve(y.size());
  for (double v : y) key.bits.push_back(std::bit_cast<std::uint64_t>(v));
  return key;
}

std::size_t EvalKeyHash::operator()(const EvalKey& key) const noexcept {
  std::uint64_t h = MultiIndexHash{}(key.fidelity);
  for (auto b : key.bits) h = rng::mix(h, b);
  return static_cast<std::size_t>(h);
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Record: "<a1>-<a2>...;<hex y1>,<hex y2>...;<hex value>"
bool parse_record(const std::string& line, EvalKey& key, double& value) {
  const auto s1 = line.find(';');
  const auto s2 = line.find(';', s1 == std::string::npos ? s1 : s1 + 1);
  if (s1 == std::string::npos || s2 == std::string::npos) return false;
  try {
    std::vector<int> fid;
    std::stringstream fs(line.substr(0, s1));
    for (std::string tok; std::getline(fs, tok, '-');) {
      if (!tok.empty()) fid.push_back(std::stoi(tok));
    }
    key.fidelity = MultiIndex(std::move(fid));
    key.bits.clear();
    std::stringstream ps(line.substr(s1 + 1, s2 - s1 - 1));
    for (std::string tok; std::getline(ps, tok, ',');) key.bits.push_back(std::stoull(tok, nullptr, 16));
    value = std::bit_cast<double>(static_cast<std::uint64_t>(std::stoull(line.substr(s2 + 1), nullptr, 16)));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

EvalCache::EvalCache(const std::filesystem::path& persist_file) {
  if (std::filesystem::exists(persist_file)) {
    std::ifstream in(persist_file);
    if (!in) {
      degraded_ = true;
      warning_ = "cannot read cache file " + persist_file.string();
      return;
    }
    EvalKey key;
    double value = 0.0;
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      if (parse_record(line, key, value)) entries_.try_emplace(key, Entry{value, false});
    }
  }
  out_.open(persist_file, std::ios::app);
  if (!out_) {
    degraded_ = true;
    warning_ = "cannot open cache file " + persist_file.string() + " for writing; continuing in memory";
  }
}

void EvalCache::persist(const EvalKey& key, double value) {
  if (!out_.is_open() || degraded_) return;
  std::string line = key.fidelity.to_string() + ";";
  for (std::size_t i = 0; i < key.bits.size(); ++i) line += (i ? "," : "") + hex64(key.bits[i]);
  line += ";" + hex64(std::bit_cast<std::uint64_t>(value)) + "\n";
  out_ << line;
  out_.flush();
  if (!out_) {
    degraded_ = true;
    warning_ = "write to cache file failed; continuing in memory";
  }
}

CacheLookup EvalCache::get_or_eval(const ModelHierarchy& model, const MultiIndex& fidelity, std::span<const double> y) {
  auto key = make_eval_key(fidelity, y);
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      if (it->second.charged) return {it->second.value, true};
      it->second.charged = true;
      total_cost_ += model.cost(fidelity);
      ++charged_;
      ++per_fidelity_[fidelity];
      return {it->second.value, false};
    }
  }
  // Evaluate outside the lock; a concurrent duplicate computes the same bits.
  const double value = model.evaluate(fidelity, y);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.try_emplace(key, Entry{value, false});
  if (it->second.charged) return {it->second.value, true};
  it->second.charged = true;
  total_cost_ += model.cost(fidelity);
  ++charged_;
  ++per_fidelity_[fidelity];
  if (inserted) persist(key, value);
  return {it->second.value, false};
}

double EvalCache::total_cost() const {
  std::lock_guard lock(mutex_);
  return total_cost_;
}

std::size_t EvalCache::charged_evaluations() const {
  std::lock_guard lock(mutex_);
  return charged_;
}

std::map<MultiIndex, std::size_t> EvalCache::points_per_fidelity() const {
  std::lock_guard lock(mutex_);
  return per_fidelity_;
}

std::vector<std::vector<double>> EvalCache::charged_points(const MultiIndex& fidelity) const {
  std::lock_guard lock(mutex_);
  std::vector<std::vector<double>> out;
  for (const auto& [key, entry] : entries_) {
    if (!entry.charged || key.fidelity != fidelity) continue;
    std::vector<double> y;
    for (auto b : key.bits) y.push_back(std::bit_cast<double>(b));
    out.push_back(std::move(y));
  }
  return out;
}

bool EvalCache::is_charged(const MultiIndex& fidelity, std::span<const double> y) const {
  const auto key = make_eval_key(fidelity, y);
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  return it != entries_.end() && it->second.charged;
}

}  // namespace pmisc
