#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "besselcm/enclosure.hpp"
#include "besselcm/rational.hpp"

namespace besselcm {

// ---------------------------------------------------------------- expressions

/// 1, e^{beta/t} or psi^(n)(t).
struct Atom {
  enum class Kind { one, exp, polygamma };
  Kind kind = Kind::one;
  Rational beta;   // exp only
  unsigned n = 0;  // polygamma only, n >= 1

  static Atom unit() { return {}; }
  static Atom exponential(const Rational& beta) { return {Kind::exp, beta, 0}; }
  static Atom psi(unsigned n) { return {Kind::polygamma, Rational(0), n}; }

  friend bool operator<(const Atom& a, const Atom& b) {
    return std::tie(a.kind, a.beta, a.n) < std::tie(b.kind, b.beta, b.n);
  }
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.kind == b.kind && a.beta == b.beta && a.n == b.n;
  }
};

/// Finite sum of coefficient * t^a * atom, like terms merged, zero terms dropped.
class CMExpression {
 public:
  using Key = std::pair<Atom, Rational>;  // (atom, exponent a)

  CMExpression() = default;
  static CMExpression term(const Rational& coeff, const Rational& a, const Atom& atom = Atom::unit());

  /// alpha e^{beta/t} - psi'(t) - alpha.
  static CMExpression H(const Rational& alpha, const Rational& beta);

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  CMExpression derivative() const;
  /// t^r * this.
  CMExpression times_power(const Rational& r) const;

  CMExpression& operator+=(const CMExpression& b);
  CMExpression& operator-=(const CMExpression& b);
  friend CMExpression operator+(CMExpression a, const CMExpression& b) { return a += b; }
  friend CMExpression operator-(CMExpression a, const CMExpression& b) { return a -= b; }
  friend CMExpression operator*(const Rational& c, CMExpression a);
  friend bool operator==(const CMExpression& a, const CMExpression& b) { return a.terms_ == b.terms_; }

  /// Enclosure at t > 0, relative to max(1, |term|) per atom.
  Enclosure operator()(const Rational& t, int precision) const;

  std::string to_string() const;

 private:
  void add(const Key& key, const Rational& coeff);
  std::map<Key, Rational> terms_;
};

// ---------------------------------------------------------------- degree checks

enum class CellVerdict { pass, fail, indeterminate };
std::string to_string(CellVerdict v);

struct DegreeCell {
  unsigned n = 0;
  Rational t;
  Enclosure value;  // of (-1)^n (t^r f)^(n)(t)
  int precision = 0;
  CellVerdict verdict = CellVerdict::indeterminate;
};

struct DegreeReport {
  std::string function;
  Rational r;
  unsigned N = 0;
  std::vector<Rational> grid;
  std::vector<DegreeCell> cells;  // ordered by t, then n
  CellVerdict summary = CellVerdict::pass;
  /// First failing cell when summary == fail.
  std::optional<std::size_t> witness;
  /// Exit code per the CLI contract: 0 pass, 1 fail, 2 indeterminate.
  int exit_code() const;
};

nlohmann::json to_json(const DegreeReport& report);

struct CMCheckOptions {
  int precision = 60;
  int precision_cap = 150;
  unsigned threads = 1;
};

/// Finite-order evidence that t^r f is completely monotonic: signs of
/// (-1)^n (t^r f)^(n) for n = 0..N at each grid point. Not a proof.
DegreeReport cm_check(const CMExpression& f, const Rational& r, unsigned N, const std::vector<Rational>& grid,
                      const CMCheckOptions& options = {}, const std::string& name = "f");

struct FalsificationResult {
  bool found = false;
  Rational t;
  Enclosure derivative;  // (t^r f)'(t), sign-definitely positive when found
  std::vector<Rational> scanned;
};

/// Scans t = t0, 2 t0, 4 t0, ... (at most `octaves` points) for a point where
/// (t^r f)' is sign-definitely positive, which rules out complete monotonicity.
FalsificationResult falsify_degree(const CMExpression& f, const Rational& r, const Rational& t0 = Rational(1),
                                   unsigned octaves = 24, int precision = 60);

struct EmpiricalDegree {
  bool infinite = false;            // only for the zero expression
  std::optional<Rational> largest;  // largest candidate passing the battery
  std::vector<DegreeReport> reports;
};

/// Largest r among `candidates` (ascending) passing cm_check; reported as an
/// empirical degree, not the sup of the definition.
EmpiricalDegree empirical_degree(const CMExpression& f, const std::vector<Rational>& candidates, unsigned N,
                                 const std::vector<Rational>& grid, const CMCheckOptions& options = {});

// ---------------------------------------------------------------- p(t)

struct PLimitEntry {
  Rational t;
  std::optional<Enclosure> value;  // empty when the denominator enclosure contains 0
  int digits = 0;
};

/// p(t) = (t^2 psi''(t) + e^{1/t}) / (t [e^{1/t} - psi'(t) - 1]); working digits
/// grow like 10 + 4 log10(t) to absorb the cancellation.
std::vector<PLimitEntry> p_limit_scan(const std::vector<Rational>& t_values, int precision = 30);

// ---------------------------------------------------------------- kernel inequality

struct KernelRow {
  Rational u;
  Enclosure margin;  // i_k(u) - kernel^(k-1)(u)
  bool pass = false;
};

struct RayCertificate {
  Rational a;     // ray [a, inf)
  Enclosure K4;   // K_4(a)
  Enclosure K3;   // K_3(a)
  bool holds = false;
};

struct KernelCertificate {
  unsigned k = 0;
  std::vector<KernelRow> rows;
  std::optional<RayCertificate> ray;  // k = 5 only
  bool all_pass() const;
};

/// i_k(u) >= kernel^(k-1)(u) at the grid points; for k = 5 also the ray
/// [7, inf) via kernel^(4)(u) <= u K_4(7) - 4 K_3(7) <= (u + 6)/720 <= i_5(u).
KernelCertificate kernel_certificate(unsigned k, const std::vector<Rational>& grid, int precision = 30,
                                     unsigned threads = 1);

struct ConjectureReport {
  std::string claim;
  std::vector<Rational> grid;
  int precision = 0;
  std::optional<std::pair<Rational, Enclosure>> counterexample;
  std::size_t indeterminate = 0;
};

nlohmann::json to_json(const ConjectureReport& report);

/// i_k >= kernel^(k-1) at each grid point, reporting the first sign-definite violation.
ConjectureReport kernel_conjecture_scan(unsigned k, const std::vector<Rational>& grid, int precision = 30,
                                        unsigned threads = 1);
/// H_{k,beta} decreasing along the grid.
ConjectureReport h_decreasing_scan(unsigned k, const Rational& beta, const std::vector<Rational>& grid,
                                   int precision = 30, unsigned threads = 1);

// ---------------------------------------------------------------- identities

struct IdentityReport {
  unsigned k = 0;
  unsigned N = 0;
  std::size_t compared = 0;
  /// (form, index) of the first mismatch.
  std::optional<std::pair<std::string, unsigned>> mismatch;
  bool ok() const { return !mismatch; }
};

/// Termwise Laplace check of the two integral representations of
/// e^{1/z} - sum_{m<=k} 1/(m! z^m): Bessel form and hypergeometric form.
IdentityReport verify_identity(unsigned k, unsigned N);

struct HKernelReport {
  std::vector<KernelRow> kernel_rows;  // i_1 - kernel on the grid
  std::vector<std::pair<Rational, Enclosure>> h_values;  // (t, h(t) - 1)
  /// (t, quadrature enclosure, direct enclosure of h(t) - 1).
  std::vector<std::tuple<Rational, Enclosure, Enclosure>> quadrature;
  bool ok = false;
};

/// Kernel nonnegativity on the grid, h(t) > 1 at the grid points, and the
/// integral representation of h(t) - 1 by quadrature at t in `quad_t`.
HKernelReport h_kernel_check(const std::vector<Rational>& grid, const std::vector<Rational>& quad_t,
                             int precision = 30, const Rational& tol = Rational(1, 1000000));

struct DegreePrediction {
  std::string label;             // "4", "2", "1", "not CM", "undetermined"
  std::optional<Rational> r;     // predicted degree when known
  std::optional<Rational> constant;  // lim t^r H(t)
  std::optional<Enclosure> max_F, max_G;
  std::string reason;
};

DegreePrediction predict_degree(const Rational& alpha, const Rational& beta, int precision = 30);

struct DegreeConditionsReport {
  Rational alpha, beta;
  DegreePrediction prediction;
  std::optional<Enclosure> constant_check;  // t^r H(t) at a large t
  std::optional<DegreeReport> at_degree;
  std::optional<FalsificationResult> above_degree;  // r + 1/2
  bool consistent = false;
};

DegreeConditionsReport degree_conditions_check(const Rational& alpha, const Rational& beta,
                                               const std::vector<Rational>& grid, unsigned N = 8,
                                               const CMCheckOptions& options = {});

struct VnDegreeReport {
  bool assembly_n1 = false;  // x^2 [e^{1/x} - 1 - psi'] = sum of the two CM parts
  bool assembly_n3 = false;  // coefficients -1/24, -1/(24x), -1/(6! x^2), 17/(6! x^3)
  CMExpression remainder_n3;  // the four-term Taylor bookkeeping
  DegreeReport check_n1;
  DegreeReport check_n3;
  Enclosure quadrature;  // int_0^inf u^4 V_1(u) e^{-2u} du
  Enclosure direct;      // 1/2 + 1/8 + 1/48 - psi'(2)
  bool quadrature_agrees = false;
  bool ok() const;
};

VnDegreeReport remark_vn_degree_check(const std::vector<Rational>& grid, const CMCheckOptions& options = {});

}  // namespace besselcm
