#pragma once

#include <cstddef>

#include "besselcm/enclosure.hpp"
#include "besselcm/polynomial.hpp"
#include "besselcm/rational.hpp"

namespace besselcm {

// Precision arguments are decimal digits. Unless noted otherwise the result
// width is at most 10^-precision relative to max(1, |value|).

/// Term cap shared by the series evaluators.
constexpr std::size_t kTermCap = 1'000'000;

/// Process-wide cap on series terms (default kTermCap); series needing more throw.
std::size_t term_cap();
void set_term_cap(std::size_t cap);

/// Exact B_n from sum_{k<=n} C(n+1,k) B_k = 0, B_1 = -1/2. Thread-safe memo.
Rational bernoulli(unsigned n);

/// Stored decimal enclosure of pi, good to about 118 digits.
Enclosure pi_enclosure();

Enclosure exp_enclosure(const Rational& x, int precision);
/// Monotone extension: [exp(lo), exp(hi)].
Enclosure exp_enclosure(const Enclosure& x, int precision);

/// Natural logarithm, x > 0.
Enclosure log_enclosure(const Rational& x, int precision);

/// sum_{n < terms} u^n / (n! (n+k)!), exactly.
Polynomial bessel_partial_polynomial(unsigned k, unsigned terms);

/// i_k(u) = I_k(2 sqrt u) / u^{k/2} = sum_n u^n / (n! (n+k)!), u >= 0.
Enclosure bessel_ratio(unsigned k, const Rational& u, int precision);
/// Monotone extension over u >= 0.
Enclosure bessel_ratio(unsigned k, const Enclosure& u, int precision);

/// 1F2(1; b1, b2; x) for x >= 0 and b1, b2 not in {0, -1, -2, ...}.
Enclosure hyp1f2(const Rational& b1, const Rational& b2, const Rational& x, int precision);

enum class PolygammaMethod {
  /// Recurrence to z >= threshold, then the Bernoulli asymptotic series,
  /// truncated with the first omitted term as error bound.
  asymptotic,
  /// Hurwitz series with integral-comparison tail; slow, meant as an oracle.
  hurwitz,
};

/// psi^(n)(x) for n >= 1, x > 0. A positive threshold overrides the automatic
/// lift target of the asymptotic method.
Enclosure polygamma(unsigned n, const Rational& x, int precision,
                    PolygammaMethod method = PolygammaMethod::asymptotic, long threshold = 0);
/// Monotone extension over x > 0.
Enclosure polygamma(unsigned n, const Enclosure& x, int precision);

/// Numerator A_l(q) of K_l = A_l(q)/(1-q)^{l+1}, q = e^{-a}.
Polynomial k_tail_numerator(unsigned l);

/// K_l(a) = sum_{k>=1} k^l e^{-ka}, a > 0.
Enclosure k_tail(unsigned l, const Rational& a, int precision);
Enclosure k_tail(unsigned l, const Enclosure& a, int precision);

/// V_n(u) = sum_{k>=1} 2 / ((u^2 + 4 pi^2 k^2) (2 pi k)^{2n}), n >= 1, u >= 0.
Enclosure vn_remainder(unsigned n, const Rational& u, int precision);

/// Gaps of the sandwich
///   0 >= e^x - S_n(x) - a_n(b) x^{n+1} >= R (b - x) x^{n+1},
/// with upper = 0 - middle and lower = middle - right side. Both are
/// nonnegative, and exactly zero at x = 0 and x = b.
struct ExpTaylorGaps {
  Enclosure lower;
  Enclosure upper;
};

ExpTaylorGaps exp_taylor_bound(unsigned n, const Rational& b, const Rational& x, int precision = 40);

}  // namespace besselcm
