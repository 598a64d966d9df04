#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "besselcm/enclosure.hpp"

namespace besselcm {

/// Truncated Taylor expansion f(X + h) = sum_j c_j h^j with enclosure
/// coefficients. Evaluated over an interval X, c_j encloses f^(j)(xi)/j! for
/// every xi in X, which is what the quadrature error bounds need.
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::vector<Enclosure> coefficients) : c_(std::move(coefficients)) {}
  static Jet constant(const Enclosure& value, std::size_t order);
  static Jet variable(const Enclosure& x, std::size_t order);

  std::size_t order() const { return c_.size() - 1; }
  const Enclosure& operator[](std::size_t j) const { return c_[j]; }
  const Enclosure& value() const { return c_[0]; }
  /// Enclosure of the j-th derivative.
  Enclosure derivative(std::size_t j) const;

  Jet& operator+=(const Jet& b);
  Jet& operator-=(const Jet& b);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, const Enclosure& s);
  friend Jet operator*(const Enclosure& s, Jet a) { return std::move(a) * s; }
  Jet operator-() const;

 private:
  std::vector<Enclosure> c_;
};

Jet exp(const Jet& f, int precision);

/// Jet of i_k at X >= 0; uses i_k^(j) = i_{k+j}.
Jet bessel_jet(unsigned k, const Enclosure& x, std::size_t order, int precision);

using JetFunction = std::function<Jet(const Jet&)>;

struct QuadratureResult {
  Enclosure value;
  std::size_t pieces = 0;
  /// False when max_pieces stopped the refinement before reaching tol.
  bool converged = true;
};

/// Rigorous adaptive Simpson rule on [a, b]: each piece contributes
/// S - (b-a)^5/2880 * f''''(piece), with f'''' taken from an order-4 jet over
/// the piece. Pieces are halved until their share of `tol` is met.
QuadratureResult integrate_simpson(const JetFunction& f, const Rational& a, const Rational& b, const Rational& tol,
                                   std::size_t max_pieces = 1u << 16);

}  // namespace besselcm
