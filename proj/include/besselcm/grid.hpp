#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "besselcm/rational.hpp"

namespace besselcm {

enum class GridScale { linear, geometric };

struct GridSpec {
  GridScale scale = GridScale::geometric;
  Rational lo;
  Rational hi;
  unsigned count = 1;
};

/// "geometric:0.01,6,40" or "linear:1,3,5" (lo, hi, count). Endpoints accept
/// decimals, integers or p/q. Throws std::invalid_argument.
GridSpec parse_grid(std::string_view text);
std::string to_string(const GridSpec& spec);

/// Grid points as short rationals (about `significant` digits), endpoints exact.
std::vector<Rational> make_grid(const GridSpec& spec, int significant = 8);

/// Geometric, 25 points from 1/100 to 1000.
GridSpec default_cm_grid();

}  // namespace besselcm
