#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based streams: every draw is a pure function of its key, so values
// do not depend on call order or on which thread asks.
namespace pmisc::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

inline std::uint64_t mix(std::uint64_t h, double v) { return mix(h, std::bit_cast<std::uint64_t>(v)); }

/// Uniform on (0,1), never exactly 0 or 1.
constexpr double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two derived uniforms.
inline double standard_normal(std::uint64_t key) {
  const double u1 = to_open_unit(splitmix64(key ^ 0x5851f42d4c957f2dULL));
  const double u2 = to_open_unit(splitmix64(key ^ 0x14057b7ef767814fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace pmisc::rng
