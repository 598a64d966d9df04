#include "besselcm/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace besselcm {

GridSpec parse_grid(std::string_view text) {
  GridSpec spec;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("grid: expected scale:lo,hi,count");
  const std::string_view scale = text.substr(0, colon);
  if (scale == "geometric" || scale == "geom" || scale == "log")
    spec.scale = GridScale::geometric;
  else if (scale == "linear" || scale == "lin")
    spec.scale = GridScale::linear;
  else
    throw std::invalid_argument("grid: unknown scale '" + std::string(scale) + "'");

  std::vector<std::string_view> parts;
  std::string_view rest = text.substr(colon + 1);
  for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
    parts.push_back(rest.substr(0, pos));
  parts.push_back(rest);
  if (parts.size() != 3) throw std::invalid_argument("grid: expected lo,hi,count");

  spec.lo = parse_rational(parts[0]);
  spec.hi = parse_rational(parts[1]);
  const Rational count = parse_rational(parts[2]);
  if (count.get_den() != 1 || count < 1 || count > 1000000) throw std::invalid_argument("grid: count must be a positive integer");
  spec.count = static_cast<unsigned>(count.get_num().get_ui());
  if (spec.hi < spec.lo || (spec.count > 1 && spec.hi == spec.lo)) throw std::invalid_argument("grid: need lo < hi");
  if (spec.scale == GridScale::geometric && sgn(spec.lo) <= 0)
    throw std::invalid_argument("grid: geometric grids need lo > 0");
  return spec;
}

std::string to_string(const GridSpec& spec) {
  return std::string(spec.scale == GridScale::geometric ? "geometric:" : "linear:") + to_string(spec.lo) + "," +
         to_string(spec.hi) + "," + std::to_string(spec.count);
}

std::vector<Rational> make_grid(const GridSpec& spec, int significant) {
  std::vector<Rational> grid;
  grid.reserve(spec.count);
  if (spec.count == 1) return {spec.lo};
  const double lo = to_double(spec.lo), hi = to_double(spec.hi);
  const unsigned n = spec.count - 1;
  for (unsigned i = 0; i <= n; ++i) {
    if (i == 0) {
      grid.push_back(spec.lo);
    } else if (i == n) {
      grid.push_back(spec.hi);
    } else if (spec.scale == GridScale::linear) {
      Rational f(i, n);
      f.canonicalize();
      grid.push_back(spec.lo + (spec.hi - spec.lo) * f);
    } else {
      grid.push_back(rational_from_double(lo * std::pow(hi / lo, double(i) / n), significant));
    }
  }
  return grid;
}

GridSpec default_cm_grid() { return {GridScale::geometric, Rational(1, 100), Rational(1000), 25}; }

}  // namespace besselcm
