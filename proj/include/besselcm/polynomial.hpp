#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "besselcm/rational.hpp"

namespace besselcm {

/// Dense univariate polynomial with exact rational coefficients, stored in
/// ascending powers. The highest stored coefficient is never zero; the zero
/// polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> ascending);
  Polynomial(std::initializer_list<Rational> ascending);

  static Polynomial constant(const Rational& c);
  static Polynomial monomial(const Rational& c, std::size_t power);
  /// The identity polynomial x.
  static Polynomial identity();

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  /// Coefficient of x^k; zero beyond the degree.
  Rational coefficient(std::size_t k) const;
  Rational leading() const;

  /// Horner evaluation, exact.
  Rational operator()(const Rational& x) const;

  Polynomial derivative() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  Polynomial& operator/=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator/(Polynomial a, const Rational& c) { return a /= c; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned exponent) const;

  /// Human-readable, highest power first, e.g. "x^2 - 3/2*x + 1".
  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Q(x) = P(x + a), by repeated synthetic division (Horner shift).
Polynomial taylor_shift(const Polynomial& p, const Rational& a);

/// Q(x) = P(s * x).
Polynomial scale_argument(const Polynomial& p, const Rational& s);

/// Q(x) = P(-x).
Polynomial reflect(const Polynomial& p);

/// P(Q(x)).
Polynomial compose(const Polynomial& p, const Polynomial& q);

/// Euclidean division a = q*b + r with deg r < deg b. Throws on b = 0.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

}  // namespace besselcm
