#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "besselcm/polynomial.hpp"
#include "besselcm/rational.hpp"

namespace besselcm {

enum class Verdict { certified, falsified, inconclusive };

std::string to_string(Verdict v);

/// Bernstein-bound summary for one piece [shift, shift + width].
struct PieceReport {
  Rational shift;
  Rational width;
  Rational min_bk;
  Rational max_bk;
  std::size_t argmin = 0;
};

struct PositivityCertificate {
  Verdict verdict = Verdict::inconclusive;
  Rational lo;
  Rational hi;
  /// Leaf pieces in interval order.
  std::vector<PieceReport> pieces;
  /// Point of [lo, hi] where the polynomial is <= 0, when falsified.
  std::optional<Rational> witness;
};

nlohmann::json to_json(const PositivityCertificate& cert);

Rational poly_eval(const Polynomial& p, const Rational& x);

/// Sign changes in the nonzero coefficient sequence. Throws on the zero polynomial.
std::size_t descartes_sign_changes(const Polynomial& p);

/// b_k = sum_{l<=k} a_l C(k,l)/C(n,l), k = 0..n. min/max b_k bound p on [0,1].
/// Throws on the zero polynomial.
std::vector<Rational> cargo_shisha_bounds(const Polynomial& p);

struct CertifyOptions {
  /// Bisection depth per piece before giving up.
  unsigned max_depth = 12;
  /// Exact sample points per failing piece when looking for a witness.
  unsigned witness_samples = 16;
  unsigned threads = 1;
};

/// Positivity of p on [lo, hi]: each step-length piece is mapped onto [0,1]
/// and bounded with cargo_shisha_bounds; failing pieces are sampled for a
/// witness and otherwise halved. A final short piece is clipped to hi.
PositivityCertificate certify_positive_on_interval(const Polynomial& p, const Rational& lo, const Rational& hi,
                                                   const Rational& step, const CertifyOptions& options = {});

/// Bisects [lo, hi] down to width <= `width` around a sign change of p.
/// Requires p(lo), p(hi) nonzero with opposite signs.
std::pair<Rational, Rational> isolate_root(const Polynomial& p, Rational lo, Rational hi, const Rational& width);

/// Q_n(x) = sum_k C(n,k) (2n-k)!/n! x^(n-k).
Polynomial pade_q(unsigned n);

/// Rational bounds for the exponential built from Q_{2n} and Q_{2m+1}:
///   Q_{2n}(x)/Q_{2n}(-x) < e^{1/x} < -Q_{2m+1}(x)/Q_{2m+1}(-x),  x >= min_x.
/// The *_num/*_den members are the same ratios in u = 1/x, so that
///   lower_num(u)/lower_den(u) < e^u < upper_num(u)/upper_den(u),  0 < u <= 1/min_x.
struct ExpBounds {
  Polynomial q_even;
  Polynomial q_odd;
  Polynomial lower_num;
  Polynomial lower_den;
  Polynomial upper_num;
  Polynomial upper_den;
  Rational min_x;
};

ExpBounds lemma1_exp_bounds(unsigned m, unsigned n);

/// One rational literal per line ("p/q", integer or decimal); blank lines and
/// '#' comments skipped. Throws std::runtime_error naming the line on bad input.
std::vector<Rational> read_rationals(const std::string& path);
/// Ascending coefficients in the read_rationals format.
Polynomial read_polynomial(const std::string& path);

}  // namespace besselcm
