#pragma once

#include <string>

#include "besselcm/polynomial.hpp"
#include "besselcm/rational.hpp"

namespace besselcm {

/// Bits carried by rounded enclosure endpoints on this thread; 0 means exact.
long working_bits();

/// Bits used for a target of `digits` decimal digits, plus guard bits.
long bits_for_digits(int digits);

/// RAII scope that sets the working precision of the current thread.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits);
  static PrecisionScope digits(int decimal_digits) { return PrecisionScope(bits_for_digits(decimal_digits)); }
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

/// Closed interval [lo, hi] with exact rational endpoints that is guaranteed
/// to contain a real value. Arithmetic rounds endpoints outward to the
/// working precision of the calling thread.
class Enclosure {
 public:
  Enclosure() = default;
  Enclosure(const Rational& point) : lo_(point), hi_(point) {}  // NOLINT: points promote implicitly
  Enclosure(long point) : lo_(point), hi_(point) {}              // NOLINT
  Enclosure(Rational lo, Rational hi);

  /// Endpoints rounded outward to the current working precision.
  static Enclosure outward(const Rational& lo, const Rational& hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return (lo_ + hi_) / 2; }
  bool is_point() const { return lo_ == hi_; }

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Enclosure& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
  bool overlaps(const Enclosure& other) const { return lo_ <= other.hi_ && other.lo_ <= hi_; }

  bool positive() const { return sgn(lo_) > 0; }
  bool negative() const { return sgn(hi_) < 0; }
  bool nonnegative() const { return sgn(lo_) >= 0; }
  bool nonpositive() const { return sgn(hi_) <= 0; }
  bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
  /// Every point of *this is below every point of other.
  bool less_than(const Enclosure& other) const { return hi_ < other.lo_; }

  Enclosure& operator+=(const Enclosure& b);
  Enclosure& operator-=(const Enclosure& b);
  Enclosure& operator*=(const Enclosure& b);
  Enclosure& operator/=(const Enclosure& b);

  friend Enclosure operator+(Enclosure a, const Enclosure& b) { return a += b; }
  friend Enclosure operator-(Enclosure a, const Enclosure& b) { return a -= b; }
  friend Enclosure operator*(Enclosure a, const Enclosure& b) { return a *= b; }
  friend Enclosure operator/(Enclosure a, const Enclosure& b) { return a /= b; }
  Enclosure operator-() const { return Enclosure(-hi_, -lo_); }

  friend bool operator==(const Enclosure& a, const Enclosure& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

  /// "[lo, hi]" with exact "p/q" endpoints, or fixed-point when digits >= 0.
  std::string str(int digits = -1) const;

 private:
  Rational lo_{0};
  Rational hi_{0};
};

/// Scientific notation with `significant` digits, rounded down (or up).
std::string decimal_bound(const Rational& x, int significant, bool up);

Enclosure hull(const Enclosure& a, const Enclosure& b);
/// Throws std::domain_error when the intervals are disjoint.
Enclosure intersect(const Enclosure& a, const Enclosure& b);
Enclosure abs(const Enclosure& x);
Enclosure sqr(const Enclosure& x);
Enclosure pow(const Enclosure& x, unsigned exponent);
/// Widen by `radius` on both sides.
Enclosure widen(const Enclosure& x, const Rational& radius);

/// Interval Horner evaluation of an exact polynomial.
Enclosure evaluate(const Polynomial& p, const Enclosure& x);

}  // namespace besselcm
