#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "besselcm/enclosure.hpp"
#include "besselcm/polynomial.hpp"
#include "besselcm/quadrature.hpp"

namespace besselcm {

/// sum_i p_i(u) E^i with E = e^u and frequencies i >= 0.
class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::map<unsigned, Polynomial> terms);
  static ExpPoly term(unsigned frequency, Polynomial p);
  static ExpPoly polynomial(Polynomial p) { return term(0, std::move(p)); }

  const std::map<unsigned, Polynomial>& terms() const { return terms_; }
  Polynomial coefficient(unsigned frequency) const;
  bool is_zero() const { return terms_.empty(); }
  unsigned max_frequency() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  ExpPoly derivative() const;

  ExpPoly& operator+=(const ExpPoly& b);
  ExpPoly& operator-=(const ExpPoly& b);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator*(ExpPoly a, const Polynomial& p);
  ExpPoly operator-() const;
  friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.terms_ == b.terms_; }

  /// Exact value at u = 0.
  Rational at_zero() const;
  /// sum_i p_i(u): the numerator with E replaced by 1.
  Polynomial at_unit_exponential() const;
  /// Exact division by E; requires p_0 = 0.
  ExpPoly divided_by_exponential() const;
  /// Exact division by E - 1 when sum_i p_i = 0.
  std::optional<ExpPoly> divided_by_exponential_minus_one() const;

  /// Display grouped by e^{iu}, e.g. "(u - 4)e^{3u} + (11u - 12)e^{2u} + u + 4".
  std::string to_string() const;

 private:
  void normalize();
  std::map<unsigned, Polynomial> terms_;
};

/// numerator / (E - 1)^m, kept with the numerator not divisible by E - 1.
class ExpPolyQuotient {
 public:
  ExpPolyQuotient() = default;
  ExpPolyQuotient(ExpPoly numerator, unsigned pole_order);  // NOLINT: canonicalizes
  ExpPolyQuotient(const ExpPoly& numerator) : ExpPolyQuotient(numerator, 0) {}  // NOLINT

  const ExpPoly& numerator() const { return num_; }
  unsigned pole_order() const { return m_; }
  bool is_zero() const { return num_.is_zero(); }

  friend ExpPolyQuotient operator+(const ExpPolyQuotient& a, const ExpPolyQuotient& b);
  friend ExpPolyQuotient operator-(const ExpPolyQuotient& a, const ExpPolyQuotient& b);
  friend ExpPolyQuotient operator*(const ExpPolyQuotient& a, const ExpPolyQuotient& b);
  friend bool operator==(const ExpPolyQuotient& a, const ExpPolyQuotient& b) {
    return a.m_ == b.m_ && a.num_ == b.num_;
  }

  std::string to_string() const;

 private:
  ExpPoly num_;
  unsigned m_ = 0;
};

ExpPolyQuotient differentiate(const ExpPolyQuotient& f);

/// k-th derivative of u/(1 - e^{-u}) = u E/(E - 1).
ExpPolyQuotient kernel_derivative(unsigned k);

/// First N Taylor coefficients at 0. Throws std::domain_error naming the pole
/// order when f has a genuine pole there.
std::vector<Rational> series_at_zero(const ExpPolyQuotient& f, unsigned N);

/// Evaluates one ring element. Points u > 0 use direct interval evaluation,
/// with precision raised until the relative width target is met; intervals
/// touching 0 (inside [0, 1/4)) use a cached Taylor expansion at 0 plus a
/// Cauchy tail bound.
class ExpPolyEvaluator {
 public:
  explicit ExpPolyEvaluator(ExpPolyQuotient f);
  ExpPolyEvaluator(const ExpPolyEvaluator& other)
      : f_(other.f_), bound_(other.bound_), analytic_at_zero_(other.analytic_at_zero_) {}

  const ExpPolyQuotient& function() const { return f_; }
  /// u > 0.
  Enclosure operator()(const Rational& u, int precision) const;
  /// u >= 0; intervals touching 0 must lie in [0, 1/4).
  Enclosure operator()(const Enclosure& u, int precision) const;
  /// Direct evaluation only (no series); u > 0.
  Enclosure direct(const Enclosure& u, int precision) const;
  /// Series path only; requires u within [0, 1/4).
  Enclosure near_zero(const Enclosure& u, int precision) const;

 private:
  std::vector<Rational> coefficients(unsigned N) const;
  ExpPolyQuotient f_;
  Rational bound_;  // sup of |f| on |u| = 1
  bool analytic_at_zero_ = true;
  mutable std::mutex mutex_;
  mutable std::vector<Rational> series_;
};

/// Shared evaluator for kernel_derivative(k), k < 32; built once per process.
const ExpPolyEvaluator& kernel_evaluator(unsigned k);

/// Throws std::domain_error for u <= 0.
Enclosure eval_enclosure(const ExpPolyQuotient& f, const Rational& u, int precision);
Enclosure eval_enclosure(const ExpPolyQuotient& f, const Enclosure& u, int precision);

/// Jet of f over u (u must stay away from 0 when f has a pole order > 0).
Jet eval_jet(const ExpPolyQuotient& f, const Jet& u, int precision);

struct FChain {
  ExpPoly F1, F1p, F1pp, F2, F2p, F2pp, F3;
  /// (name, exact value at 0) for the seven zero checks.
  std::vector<std::pair<std::string, Rational>> zeros;
};

/// F1 = (u+6)(E-1)^5 - 720 E[(u-4)E^3 + (11u-12)E^2 + (11u+12)E + u + 4],
/// F2 = F1''/(5E), F3 = F2''/(8E). Throws std::logic_error if a zero check
/// or one of the exact factorizations fails.
FChain build_F_chain();

struct F4Build {
  Polynomial F4;
  Polynomial denominator;  // DenomF5 = D5^2 D6^3
  Polynomial lower_num, lower_den, upper_num, upper_den;
};

/// Substitutes the m = 2, n = 3 exponential bounds into F3 and clears
/// denominators: F3 >= 6u F4(u) / DenomF5(u) on (0, 6].
F4Build build_F4_via_pade();

/// Index of the first coefficient where a and b differ.
std::optional<std::size_t> first_difference(const Polynomial& a, const Polynomial& b);

struct DecompositionRow {
  std::string part;  // "f1'", "f2'", "f3'"
  Rational u;
  Enclosure value;
  bool nonnegative = false;
};

struct DecompositionReport {
  bool identity_holds = false;
  std::vector<DecompositionRow> rows;
  bool all_pass() const;
};

/// f1 + f2 + f3 = F3 exactly, and f1' >= 0 on [5,inf), f2' >= 0 on [3,inf),
/// f3' >= 0 on [0,inf) at the grid points inside those rays.
DecompositionReport remark_decomposition_check(const std::vector<Rational>& grid, int precision = 30);

}  // namespace besselcm
