#pragma once

#include <climits>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmisc/multi_index.hpp"

namespace pmisc {

/// A family of evaluable fidelities q^alpha with per-fidelity cost W_alpha.
/// evaluate() must be deterministic: identical (alpha, y) give identical bits.
class ModelHierarchy {
 public:
  virtual ~ModelHierarchy() = default;

  virtual std::size_t fidelity_dims() const = 0;
  virtual std::size_t parameter_dims() const = 0;
  virtual double evaluate(const MultiIndex& fidelity, std::span<const double> y) const = 0;
  virtual double cost(const MultiIndex& fidelity) const = 0;
  /// Largest admissible level along fidelity dimension `dim`.
  virtual int max_level(std::size_t /*dim*/) const { return INT_MAX; }
  virtual std::string name() const = 0;
};

// 2D Gaussian peak with additive hash-keyed noise of scale 10^(-2 alpha).

inline constexpr double kGenzC = 36.0 / 13.0;
inline constexpr double kGenzC1 = kGenzC / 4.0;
inline constexpr double kGenzC2 = kGenzC / 9.0;

double genz_noiseless(std::span<const double> y);
double genz_noise_sample(int alpha, std::span<const double> y, std::uint64_t seed);
double genz_eval(int alpha, std::span<const double> y, std::uint64_t seed);
double genz_cost(int alpha);

class Genz2dgpNoisy final : public ModelHierarchy {
 public:
  explicit Genz2dgpNoisy(std::uint64_t seed, int max_fidelity = 8) : seed_(seed), max_fidelity_(max_fidelity) {}

  std::size_t fidelity_dims() const override { return 1; }
  std::size_t parameter_dims() const override { return 2; }
  double evaluate(const MultiIndex& fidelity, std::span<const double> y) const override;
  double cost(const MultiIndex& fidelity) const override { return genz_cost(fidelity[0]); }
  int max_level(std::size_t) const override { return max_fidelity_; }
  std::string name() const override { return "genz2dgp"; }

 private:
  std::uint64_t seed_;
  int max_fidelity_;
};

/// Method-of-lines advection-diffusion on (-1,1) with a time-dependent Dirichlet
/// drive, integrated by adaptive TR-AB2 with local-error tolerance 10^(-alpha).
/// The QoI is u(0.5, 10).
struct ParabolicOptions {
  int cells = 200;
  double final_time = 10.0;
  double qoi_x = 0.5;
  double base_diffusion = 0.1;
};

struct ParabolicSolveStats {
  double qoi = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

ParabolicSolveStats parabolic_solve(double tolerance, std::span<const double> y, const ParabolicOptions& options = {});
double parabolic_eval(int alpha, std::span<const double> y, const ParabolicOptions& options = {});
double parabolic_cost(int alpha);

class Parabolic1dNoisy final : public ModelHierarchy {
 public:
  static constexpr int kMaxFidelity = 6;

  explicit Parabolic1dNoisy(ParabolicOptions options = {}) : options_(options) {}

  std::size_t fidelity_dims() const override { return 1; }
  std::size_t parameter_dims() const override { return 2; }
  double evaluate(const MultiIndex& fidelity, std::span<const double> y) const override;
  double cost(const MultiIndex& fidelity) const override { return parabolic_cost(fidelity[0]); }
  int max_level(std::size_t) const override { return kMaxFidelity; }
  std::string name() const override { return "parabolic1d"; }

 private:
  ParabolicOptions options_;
};

/// Presents one fixed fidelity of another hierarchy as a single-fidelity model
/// with an empty fidelity index.
class FixedFidelity final : public ModelHierarchy {
 public:
  FixedFidelity(const ModelHierarchy& base, MultiIndex fidelity) : base_(base), fidelity_(std::move(fidelity)) {}

  std::size_t fidelity_dims() const override { return 0; }
  std::size_t parameter_dims() const override { return base_.parameter_dims(); }
  double evaluate(const MultiIndex&, std::span<const double> y) const override { return base_.evaluate(fidelity_, y); }
  double cost(const MultiIndex&) const override { return base_.cost(fidelity_); }
  std::string name() const override { return base_.name() + "@" + fidelity_.to_string(); }

 private:
  const ModelHierarchy& base_;
  MultiIndex fidelity_;
};

struct EvalKey {
  MultiIndex fidelity;
  std::vector<std::uint64_t> bits;
  bool operator==(const EvalKey&) const = default;
};

struct EvalKeyHash {
  std::size_t operator()(const EvalKey& key) const noexcept;
};

struct CacheLookup {
  double value = 0.0;
  bool was_hit = false;
};

/// Point-keyed store of model evaluations plus the cost ledger of a run.
///
/// Each distinct (fidelity, point) is charged cost(fidelity) the first time it
/// is requested; later requests are hits and free. Records loaded from a
/// persistence file skip the solve but are still charged on first request, so
/// the ledger does not depend on the file's contents.
class EvalCache {
 public:
  EvalCache() = default;
  /// Loads existing records and appends new ones. An unusable file leaves the
  /// cache in memory-only mode (see degraded()).
  explicit EvalCache(const std::filesystem::path& persist_file);

  CacheLookup get_or_eval(const ModelHierarchy& model, const MultiIndex& fidelity, std::span<const double> y);

  double total_cost() const;
  std::size_t charged_evaluations() const;
  std::map<MultiIndex, std::size_t> points_per_fidelity() const;
  /// Charged points at a fidelity, in unspecified order.
  std::vector<std::vector<double>> charged_points(const MultiIndex& fidelity) const;
  bool is_charged(const MultiIndex& fidelity, std::span<const double> y) const;
  bool degraded() const { return degraded_; }
  const std::string& warning() const { return warning_; }

 private:
  struct Entry {
    double value = 0.0;
    bool charged = false;
  };

  void persist(const EvalKey& key, double value);

  mutable std::mutex mutex_;
  std::unordered_map<EvalKey, Entry, EvalKeyHash> entries_;
  std::map<MultiIndex, std::size_t> per_fidelity_;
  double total_cost_ = 0.0;
  std::size_t charged_ = 0;
  std::ofstream out_;
  bool degraded_ = false;
  std::string warning_;
};

EvalKey make_eval_key(const MultiIndex& fidelity, std::span<const double> y);

}  // namespace pmisc
