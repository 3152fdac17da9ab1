#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace pmisc {

/// One-dimensional point families on [0,1].
enum class KnotFamily { clenshaw_curtis, symmetric_leja };

/// Level-to-knots rules m(level). All rules have m(1) = 1.
enum class LevelToKnots { linear, two_step, doubling };

std::string_view to_string(KnotFamily family);
std::string_view to_string(LevelToKnots rule);
KnotFamily parse_knot_family(std::string_view name);
LevelToKnots parse_level_to_knots(std::string_view name);

/// Number of points at `level` (>= 1). Throws std::invalid_argument for level 0.
std::size_t level_to_knots(LevelToKnots rule, int level);

/// Sorted, duplicate-free points in [0,1]. Throws std::invalid_argument for m = 0.
///
/// Clenshaw-Curtis points are the Chebyshev extrema mapped to [0,1] ({0.5} for
/// m = 1). Symmetric Leja points are the first m entries of a fixed sequence,
/// sorted. Both families produce bit-identical coordinates for a point that
/// appears at several sizes, so points can be used as exact cache keys.
std::vector<double> knots_1d(KnotFamily family, std::size_t m);

/// First `count` entries of the symmetric Leja sequence on [0,1], in emission
/// order: 0.5, 1, 0, then mirrored pairs.
std::vector<double> leja_sequence(std::size_t count);

/// True iff knots_1d(m(l)) is contained in knots_1d(m(l+1)) for every l < up_to_level.
bool is_nested(KnotFamily family, LevelToKnots rule, int up_to_level);

}  // namespace pmisc
