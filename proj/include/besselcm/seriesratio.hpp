#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "besselcm/enclosure.hpp"
#include "besselcm/polynomial.hpp"
#include "besselcm/rational.hpp"

namespace besselcm {

// ---------------------------------------------------------------- functions

/// F_beta(u) = kernel(u) / i_1(beta u).
Enclosure f_beta(const Enclosure& u, const Rational& beta, int precision);
/// G_beta(u) = kernel'(u) / i_2(beta u).
Enclosure g_beta(const Enclosure& u, const Rational& beta, int precision);
/// H_{k,beta}(u) = kernel^(k-1)(u) / i_k(beta u), k >= 1.
Enclosure h_k_beta(unsigned k, const Enclosure& u, const Rational& beta, int precision);

// ---------------------------------------------------------------- sequences

/// p_k = (2^{k+2} - k - 3)/(k+2)!.
Rational p_coeff(unsigned k);
/// q_k as a polynomial in beta: sum_{l<=k} C(k+2,l) (2^{k-l+2} - 2)/((k+2)! (l+2)!) beta^l.
Polynomial q_coeff(unsigned k);
/// c_k(beta) = q_k(beta)/p_k.
Rational c_coeff(unsigned k, const Rational& beta);

Integer ladder_U(unsigned k);
Integer ladder_V(unsigned k, unsigned l);
Integer ladder_W(unsigned k, unsigned m);
/// lambda_k = U_k/(k+4)!.
Rational lambda_coeff(unsigned k);
/// xi_k as a polynomial in beta, from the double-sum display.
Polynomial xi_coeff(unsigned k);
/// C_k = xi_k/lambda_k as a polynomial in beta.
Polynomial C_coeff(unsigned k);
/// theta_{k,l}, l = 0..k+1: the closed-form coefficients of C_k.
Rational theta(unsigned k, unsigned l);

Integer ladder_A(unsigned m);
Integer ladder_B(unsigned m);
Integer ladder_C(unsigned m);
/// M_m(k) from its definition (m+7) W_{k+1}(m+1) W_k(m+1) - (m+6) W_{k+1}(m+2) W_k(m).
Integer ladder_M(unsigned m, unsigned k);

struct MonotoneSequence {
  std::vector<Rational> values;
  bool increasing = false;  // non-decreasing from index 0
  bool strict = false;      // and strictly so
  /// First k with values[k+1] < values[k].
  std::optional<unsigned> first_failure;
};

MonotoneSequence c_ratio_sequence(const Rational& beta, unsigned K);
MonotoneSequence C_ratio_sequence(const Rational& beta, unsigned K);

struct LadderFailure {
  std::string check;
  unsigned k = 0;
  unsigned index = 0;  // l or m, depending on the check
};

struct LadderReport {
  unsigned k_max = 0;
  std::size_t checks = 0;
  std::vector<LadderFailure> failures;
  std::vector<Integer> C_values;  // C(0..5)
  bool ok() const { return failures.empty(); }
};

/// Exact verification up to k_max (>= 6): theta monotonicity for 4 <= k <= k_max,
/// 0 <= l <= k+1; the closed form of C_k against xi_k/lambda_k; M_m(k) = A k^2 + B k + C
/// and M_m(k) >= 0 for 0 <= m <= k-2; U/V ratio comparison; the seeds M_0, M_1, M_2;
/// A(m) > 0, B(m) < 0, C(m) > 0 for m <= k_max; W_k(k-l) = V_k(l).
LadderReport ladder_check(unsigned k_max);

// ---------------------------------------------------------------- searches

using EnclosureFunction = std::function<Enclosure(const Enclosure& u, int precision)>;

struct UnimodalResult {
  Enclosure argmax;
  Enclosure max;
  int precision = 0;       // digits in use at the end
  bool converged = false;  // bracket reached tol
  std::size_t evaluations = 0;
};

/// Golden-section search driven only by enclosure comparisons. Overlapping
/// comparisons double the precision up to `precision_cap`; if they still
/// overlap the search stops with the bracket it has. The max enclosure is
/// [best sampled lower bound, upper bound of f over the final bracket].
UnimodalResult unimodal_max(const EnclosureFunction& f, const Rational& lo, const Rational& hi, const Rational& tol,
                            int precision = 30, int precision_cap = 120);

struct SlopeScan {
  std::vector<Enclosure> values;
  /// Sign of f(u_{i+1}) - f(u_i): -1, +1, or 0 when still indeterminate at the cap.
  std::vector<int> signs;
  int sign_changes = 0;
  bool definite = true;
};

SlopeScan scan_slopes(const EnclosureFunction& f, const std::vector<Rational>& grid, int precision = 30,
                      int precision_cap = 120, unsigned threads = 1);

}  // namespace besselcm
