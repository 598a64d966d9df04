#include "besselcm/cmdegree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "besselcm/expring.hpp"
#include "besselcm/parallel.hpp"
#include "besselcm/quadrature.hpp"
#include "besselcm/seriesratio.hpp"
#include "besselcm/specfun.hpp"

namespace besselcm {

namespace {

Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

bool is_integer(const Rational& a) { return a.get_den() == 1; }

// Extra digits for cancellation between terms; callers escalate beyond this.
constexpr int kGuardDigits = 10;

}  // namespace

// ---------------------------------------------------------------- CMExpression

CMExpression CMExpression::term(const Rational& coeff, const Rational& a, const Atom& atom) {
  CMExpression e;
  e.add({atom, a}, coeff);
  return e;
}

CMExpression CMExpression::H(const Rational& alpha, const Rational& beta) {
  return term(alpha, 0, Atom::exponential(beta)) - term(1, 0, Atom::psi(1)) - term(alpha, 0);
}

void CMExpression::add(const Key& key, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  Key k = key;
  if (k.first.kind == Atom::Kind::exp && sgn(k.first.beta) == 0) k.first = Atom::unit();
  auto [it, inserted] = terms_.emplace(k, coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

CMExpression CMExpression::derivative() const {
  CMExpression d;
  for (const auto& [key, c] : terms_) {
    const auto& [atom, a] = key;
    if (sgn(a) != 0) d.add({atom, a - 1}, c * a);
    switch (atom.kind) {
      case Atom::Kind::one:
        break;
      case Atom::Kind::exp:
        d.add({atom, a - 2}, -c * atom.beta);
        break;
      case Atom::Kind::polygamma:
        d.add({Atom::psi(atom.n + 1), a}, c);
        break;
    }
  }
  return d;
}

CMExpression CMExpression::times_power(const Rational& r) const {
  CMExpression e;
  for (const auto& [key, c] : terms_) e.add({key.first, key.second + r}, c);
  return e;
}

CMExpression& CMExpression::operator+=(const CMExpression& b) {
  for (const auto& [key, c] : b.terms_) add(key, c);
  return *this;
}

CMExpression& CMExpression::operator-=(const CMExpression& b) {
  for (const auto& [key, c] : b.terms_) add(key, -c);
  return *this;
}

CMExpression operator*(const Rational& c, CMExpression a) {
  if (sgn(c) == 0) return {};
  for (auto& [key, v] : a.terms_) v *= c;
  return a;
}

Enclosure CMExpression::operator()(const Rational& t, int precision) const {
  if (sgn(t) <= 0) throw std::domain_error("CMExpression: t must be positive");
  const int digits = precision + kGuardDigits;
  std::map<Atom, Enclosure> atoms;
  std::map<Rational, Enclosure> powers;
  Enclosure log_t;
  bool have_log = false;
  for (const auto& [key, c] : terms_) {
    const auto& [atom, a] = key;
    if (!atoms.count(atom)) {
      switch (atom.kind) {
        case Atom::Kind::one:
          atoms.emplace(atom, Enclosure(1));
          break;
        case Atom::Kind::exp:
          atoms.emplace(atom, exp_enclosure(atom.beta / t, digits));
          break;
        case Atom::Kind::polygamma:
          atoms.emplace(atom, polygamma(atom.n, t, digits));
          break;
      }
    }
    if (!powers.count(a)) {
      if (is_integer(a)) {
        powers.emplace(a, Enclosure(pow(t, a.get_num().get_si())));
      } else {
        if (!have_log) {
          log_t = log_enclosure(t, digits);
          have_log = true;
        }
        PrecisionScope scope(bits_for_digits(digits));
        powers.emplace(a, exp_enclosure(log_t * Enclosure(a), digits));
      }
    }
  }
  PrecisionScope scope(bits_for_digits(digits));
  Enclosure sum(0);
  for (const auto& [key, c] : terms_) sum += Enclosure(c) * powers.at(key.second) * atoms.at(key.first);
  return sum;
}

std::string CMExpression::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    const auto& [atom, a] = key;
    os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
    first = false;
    const Rational m = abs(c);
    std::string factor;
    if (sgn(a) != 0) factor = "t^" + (is_integer(a) && sgn(a) > 0 ? besselcm::to_string(a) : "(" + besselcm::to_string(a) + ")");
    if (a == 1) factor = "t";
    std::string atom_s;
    if (atom.kind == Atom::Kind::exp) atom_s = "e^(" + besselcm::to_string(atom.beta) + "/t)";
    if (atom.kind == Atom::Kind::polygamma) atom_s = "psi^(" + std::to_string(atom.n) + ")(t)";
    std::string body = factor;
    if (!atom_s.empty()) body += (body.empty() ? "" : "*") + atom_s;
    if (body.empty())
      os << besselcm::to_string(m);
    else if (m == 1)
      os << body;
    else
      os << besselcm::to_string(m) << "*" << body;
  }
  return os.str();
}

// ---------------------------------------------------------------- degree checks

std::string to_string(CellVerdict v) {
  switch (v) {
    case CellVerdict::pass: return "pass";
    case CellVerdict::fail: return "fail";
    case CellVerdict::indeterminate: return "indeterminate";
  }
  return "?";
}

int DegreeReport::exit_code() const {
  switch (summary) {
    case CellVerdict::pass: return 0;
    case CellVerdict::fail: return 1;
    case CellVerdict::indeterminate: return 2;
  }
  return 2;
}

nlohmann::json to_json(const DegreeReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    const Rational& lo = c.value.lo();
    const Rational& hi = c.value.hi();
    cells.push_back({{"n", c.n},
                     {"t", to_string(c.t)},
                     {"lo", decimal_bound(lo, 20, false)},
                     {"hi", decimal_bound(hi, 20, true)},
                     {"digits", c.precision},
                     {"verdict", to_string(c.verdict)}});
  }
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& t : report.grid) grid.push_back(to_string(t));
  nlohmann::json j{{"function", report.function},
                   {"r", to_string(report.r)},
                   {"N", report.N},
                   {"grid", grid},
                   {"cells", cells},
                   {"summary", to_string(report.summary)},
                   {"note", "finite-order evidence on a grid, not a proof of complete monotonicity"}};
  if (report.witness) j["witness"] = cells[*report.witness];
  return j;
}

namespace {

CellVerdict classify(const Enclosure& v) {
  if (sgn(v.lo()) >= 0) return CellVerdict::pass;
  if (sgn(v.hi()) < 0) return CellVerdict::fail;
  return CellVerdict::indeterminate;
}

std::vector<CMExpression> tower(const CMExpression& g, unsigned N) {
  std::vector<CMExpression> d{g};
  for (unsigned n = 1; n <= N; ++n) d.push_back(d.back().derivative());
  return d;
}

// Precision ladder: start, start + 30, ... up to cap.
template <class Eval>
std::pair<Enclosure, int> escalate(Eval&& eval, int start, int cap, bool (*settled)(const Enclosure&)) {
  int p = start;
  Enclosure v = eval(p);
  while (!settled(v) && p + 30 <= cap) {
    p += 30;
    v = eval(p);
  }
  return {v, p};
}

bool sign_settled(const Enclosure& v) { return classify(v) != CellVerdict::indeterminate; }

}  // namespace

DegreeReport cm_check(const CMExpression& f, const Rational& r, unsigned N, const std::vector<Rational>& grid,
                      const CMCheckOptions& options, const std::string& name) {
  if (N < 1) throw std::invalid_argument("cm_check: N must be at least 1");
  for (const auto& t : grid)
    if (sgn(t) <= 0) throw std::invalid_argument("cm_check: grid points must be positive");
  DegreeReport rep;
  rep.function = name;
  rep.r = r;
  rep.N = N;
  rep.grid = grid;
  const auto d = tower(f.times_power(r), N);
  rep.cells.resize(grid.size() * (N + 1));
  parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    for (unsigned n = 0; n <= N; ++n) {
      auto eval = [&](int p) {
        Enclosure v = d[n](grid[i], p);
        return n % 2 ? -v : v;
      };
      auto [v, p] = escalate(eval, options.precision, options.precision_cap, sign_settled);
      rep.cells[i * (N + 1) + n] = {n, grid[i], v, p, classify(v)};
    }
  });
  rep.summary = CellVerdict::pass;
  for (std::size_t i = 0; i < rep.cells.size(); ++i) {
    if (rep.cells[i].verdict == CellVerdict::fail) {
      rep.summary = CellVerdict::fail;
      rep.witness = i;
      break;
    }
    if (rep.cells[i].verdict == CellVerdict::indeterminate) rep.summary = CellVerdict::indeterminate;
  }
  return rep;
}

FalsificationResult falsify_degree(const CMExpression& f, const Rational& r, const Rational& t0, unsigned octaves,
                                   int precision) {
  const CMExpression g = f.times_power(r);
  const CMExpression dg = g.derivative();
  FalsificationResult res;
  Rational t = t0;
  for (unsigned i = 0; i < octaves; ++i, t *= 2) {
    res.scanned.push_back(t);
    // t^r f must be >= 0 and (t^r f)' <= 0; either sign-definitely violated refutes.
    auto v0 = escalate([&](int p) { return g(t, p); }, precision, precision + 90, sign_settled).first;
    auto v1 = escalate([&](int p) { return dg(t, p); }, precision, precision + 90, sign_settled).first;
    if (sgn(v1.lo()) > 0 || sgn(v0.hi()) < 0) {
      res.found = true;
      res.t = t;
      res.derivative = v1;
      return res;
    }
  }
  return res;
}

EmpiricalDegree empirical_degree(const CMExpression& f, const std::vector<Rational>& candidates, unsigned N,
                                 const std::vector<Rational>& grid, const CMCheckOptions& options) {
  EmpiricalDegree out;
  if (f.is_zero()) {
    out.infinite = true;
    return out;
  }
  for (const auto& r : candidates) {
    out.reports.push_back(cm_check(f, r, N, grid, options));
    if (out.reports.back().summary != CellVerdict::pass) break;
    out.largest = r;
  }
  return out;
}

// ---------------------------------------------------------------- p(t)

std::vector<PLimitEntry> p_limit_scan(const std::vector<Rational>& t_values, int precision) {
  std::vector<PLimitEntry> out;
  for (const auto& t : t_values) {
    if (sgn(t) <= 0) throw std::invalid_argument("p_limit_scan: t must be positive");
    const double lg = std::max(0.0, std::log10(to_double(t)));
    const int digits = precision + 10 + 4 * static_cast<int>(std::ceil(lg));
    const Enclosure e = exp_enclosure(1 / t, digits);
    const Enclosure psi1 = polygamma(1, t, digits);
    const Enclosure psi2 = polygamma(2, t, digits);
    PrecisionScope scope(bits_for_digits(digits));
    const Enclosure T(t);
    const Enclosure num = T * T * psi2 + e;
    const Enclosure den = T * (e - psi1 - Enclosure(1));
    PLimitEntry entry{t, std::nullopt, digits};
    if (!den.contains_zero()) entry.value = num / den;
    out.push_back(entry);
  }
  return out;
}

// ---------------------------------------------------------------- kernel inequality

bool KernelCertificate::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return !ray || ray->holds;
}

namespace {

Enclosure kernel_margin(unsigned k, const Rational& u, int precision) {
  const Enclosure i = bessel_ratio(k, u, precision);
  const Enclosure kern = kernel_evaluator(k - 1)(u, precision);
  PrecisionScope scope(bits_for_digits(precision + kGuardDigits));
  return i - kern;
}

bool strictly_signed(const Enclosure& v) { return sgn(v.lo()) > 0 || sgn(v.hi()) < 0; }

std::pair<Enclosure, int> margin_escalated(unsigned k, const Rational& u, int precision) {
  int p = precision;
  Enclosure m = kernel_margin(k, u, p);
  while (!strictly_signed(m) && p * 2 <= 240) {
    p *= 2;
    m = kernel_margin(k, u, p);
  }
  return {m, p};
}

}  // namespace

KernelCertificate kernel_certificate(unsigned k, const std::vector<Rational>& grid, int precision,
                                     unsigned threads) {
  if (k < 1 || k > 31) throw std::invalid_argument("kernel_certificate: k out of range");
  KernelCertificate cert;
  cert.k = k;
  cert.rows.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    if (sgn(grid[i]) <= 0) throw std::invalid_argument("kernel_certificate: grid points must be positive");
    Enclosure m = margin_escalated(k, grid[i], precision).first;
    cert.rows[i] = {grid[i], m, sgn(m.lo()) > 0};
  });
  if (k == 5) {
    RayCertificate ray;
    ray.a = 7;
    ray.K4 = k_tail(4, ray.a, precision);
    ray.K3 = k_tail(3, ray.a, precision);
    // u K4 - 4 K3 <= (u + 6)/720 for all u >= 7 needs K4 <= 1/720 and -4 K3 <= 6/720;
    // (u + 6)/720 is the two-term partial sum of i_5.
    ray.holds = ray.K4.hi() < frac(1, 720) && sgn(ray.K3.lo()) >= 0;
    cert.ray = ray;
  }
  return cert;
}

nlohmann::json to_json(const ConjectureReport& report) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& u : report.grid) grid.push_back(to_string(u));
  nlohmann::json j{{"claim", report.claim},
                   {"grid", grid},
                   {"precision", report.precision},
                   {"indeterminate", report.indeterminate}};
  if (report.counterexample) {
    const auto& [u, v] = *report.counterexample;
    j["counterexample"] = {{"u", to_string(u)},
                           {"lo", decimal_bound(v.lo(), 20, false)},
                           {"hi", decimal_bound(v.hi(), 20, true)}};
    j["result"] = "sign-definite counterexample";
  } else {
    j["counterexample"] = nullptr;
    j["result"] = "no counterexample found on grid at precision " + std::to_string(report.precision);
  }
  return j;
}

ConjectureReport kernel_conjecture_scan(unsigned k, const std::vector<Rational>& grid, int precision,
                                        unsigned threads) {
  ConjectureReport rep;
  rep.claim = "i_" + std::to_string(k) + "(u) >= kernel^(" + std::to_string(k - 1) + ")(u)";
  rep.grid = grid;
  rep.precision = precision;
  std::vector<Enclosure> m(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { m[i] = margin_escalated(k, grid[i], precision).first; });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (sgn(m[i].hi()) < 0) {
      if (!rep.counterexample) rep.counterexample = {{grid[i], m[i]}};
    } else if (sgn(m[i].lo()) < 0) {
      ++rep.indeterminate;
    }
  }
  return rep;
}

ConjectureReport h_decreasing_scan(unsigned k, const Rational& beta, const std::vector<Rational>& grid,
                                   int precision, unsigned threads) {
  ConjectureReport rep;
  rep.claim = "H_{" + std::to_string(k) + "," + to_string(beta) + "}(u) is decreasing";
  rep.grid = grid;
  rep.precision = precision;
  EnclosureFunction f = [k, beta](const Enclosure& u, int p) { return h_k_beta(k, u, beta, p); };
  SlopeScan scan = scan_slopes(f, grid, precision, 4 * precision, threads);
  for (std::size_t i = 0; i < scan.signs.size(); ++i) {
    if (scan.signs[i] > 0 && !rep.counterexample) {
      PrecisionScope s(bits_for_digits(precision));
      rep.counterexample = {{grid[i + 1], scan.values[i + 1] - scan.values[i]}};
    }
    if (scan.signs[i] == 0) ++rep.indeterminate;
  }
  return rep;
}

// ---------------------------------------------------------------- identities

IdentityReport verify_identity(unsigned k, unsigned N) {
  if (N < 1) throw std::invalid_argument("verify_identity: N must be at least 1");
  IdentityReport rep;
  rep.k = k;
  rep.N = N;
  auto lhs = [](unsigned j) { return Rational(Integer(1), factorial(j)); };  // [z^-j] of e^{1/z} tail
  auto mismatch = [&](const char* form, unsigned idx) {
    if (!rep.mismatch) rep.mismatch = {{form, idx}};
  };
  // Bessel form: z^{-(k+1)} [1/(k+1)! + sum_n c_n n! / z^{n+1}], c_n the series coefficients of i_{k+2}.
  ++rep.compared;
  if (Rational(Integer(1), factorial(k + 1)) != lhs(k + 1)) mismatch("bessel", 0);
  const Polynomial ik2 = bessel_partial_polynomial(k + 2, N + 1);
  for (unsigned n = 0; n <= N; ++n) {
    ++rep.compared;
    if (ik2.coefficient(n) * Rational(factorial(n)) != lhs(k + 2 + n)) mismatch("bessel", n + 1);
  }
  // Hypergeometric form: 1/(k!(k+1)!) (1)_n / ((k+1)_n (k+2)_n n!) times (n+k)!/z^{n+k+1}.
  const Rational pre(Integer(1), Integer(factorial(k) * factorial(k + 1)));
  Rational poch_ratio = 1;  // (1)_n / ((k+1)_n (k+2)_n n!)
  for (unsigned n = 0; n <= N; ++n) {
    if (n > 0) {
      Rational step(Integer(n), Integer(k + n) * Integer(k + 1 + n) * Integer(n));
      step.canonicalize();
      poch_ratio *= step;
    }
    ++rep.compared;
    if (pre * poch_ratio * Rational(factorial(n + k)) != lhs(n + k + 1)) mismatch("hypergeometric", n);
  }
  return rep;
}

// ---------------------------------------------------------------- h(t)

namespace {

// e^{1/t} - 1 - psi'(t).
Enclosure h_minus_one(const Rational& t, int precision) {
  const Enclosure e = exp_enclosure(1 / t, precision);
  const Enclosure p = polygamma(1, t, precision);
  PrecisionScope s(bits_for_digits(precision));
  return e - Enclosure(1) - p;
}

// int_0^inf (i_1(u) - kernel(u)) e^{-tu} du.
Enclosure h_integral(const Rational& t, int precision, const Rational& tol) {
  const Rational delta(Integer(1), Integer(10000));
  const Rational U = 40;
  PrecisionScope scope(bits_for_digits(precision));
  const ExpPolyQuotient kernel = kernel_derivative(0);
  JetFunction f = [&](const Jet& u) {
    const std::size_t order = u.order();
    Jet i1 = bessel_jet(1, u.value(), order, precision);
    Jet kj = eval_jet(kernel, u, precision);
    Jet damp = exp(u * Enclosure(-t), precision);
    return (i1 - kj) * damp;
  };
  QuadratureResult mid = integrate_simpson(f, delta, U, tol / 4);
  // [0, delta]: both terms increase, so the integrand lies in [1 - kernel(delta), i_1(delta) - 1].
  const Enclosure kd = kernel_evaluator(0)(Enclosure(delta), precision);
  const Enclosure id = bessel_ratio(1, delta, precision);
  const Rational near_lo = std::min(Rational(0), (Enclosure(1) - kd).lo()) * delta;
  const Rational near_hi = std::max(Rational(0), (id - Enclosure(1)).hi()) * delta;
  // u > U: -(u+1) e^{-tu} <= integrand <= e^{2 sqrt u - tu}, and 6.3245 < sqrt(40) < 6.3246.
  const Enclosure decay = exp_enclosure(-t * U, precision);
  const Enclosure grow = exp_enclosure(2 * parse_rational("6.3246") - t * U, precision);
  const Rational tail_lo = -(decay.hi() * (U / t + 1 / (t * t) + 1 / t));
  const Rational tail_hi = grow.hi() / (t - 1 / parse_rational("6.3245"));
  return mid.value + Enclosure(near_lo + tail_lo, near_hi + tail_hi);
}

}  // namespace

HKernelReport h_kernel_check(const std::vector<Rational>& grid, const std::vector<Rational>& quad_t, int precision,
                             const Rational& tol) {
  HKernelReport rep;
  rep.ok = true;
  for (const auto& u : grid) {
    Enclosure m = margin_escalated(1, u, precision).first;
    rep.kernel_rows.push_back({u, m, sgn(m.lo()) > 0});
    rep.ok = rep.ok && rep.kernel_rows.back().pass;
    Enclosure h = h_minus_one(u, precision);
    rep.h_values.emplace_back(u, h);
    rep.ok = rep.ok && h.positive();
  }
  for (const auto& t : quad_t) {
    if (t < 1) throw std::invalid_argument("h_kernel_check: quadrature needs t >= 1");
    Enclosure q = h_integral(t, precision, tol);
    Enclosure d = h_minus_one(t, precision);
    rep.quadrature.emplace_back(t, q, d);
    rep.ok = rep.ok && widen(q, tol).overlaps(d) && q.width() <= tol;
  }
  return rep;
}

// ---------------------------------------------------------------- conditions

DegreePrediction predict_degree(const Rational& alpha, const Rational& beta, int precision) {
  if (sgn(alpha) <= 0 || sgn(beta) <= 0) throw std::domain_error("predict_degree: alpha, beta must be positive");
  DegreePrediction d;
  const Rational ab = alpha * beta;
  if (ab < 1) {
    d.label = "not CM";
    d.reason = "alpha*beta < 1 violates the necessary condition";
    return d;
  }
  if (alpha == 1 && beta == 1) {
    d.label = "4";
    d.r = 4;
    d.constant = frac(1, 24);
    d.reason = "(alpha, beta) = (1, 1)";
    return d;
  }
  if (beta > 1 && ab == 1) {
    d.label = "2";
    d.r = 2;
    d.constant = (beta - 1) / 2;
    d.reason = "beta > 1 and alpha = 1/beta";
    return d;
  }
  if (beta >= 1) {
    d.label = "1";
    d.r = 1;
    d.constant = ab - 1;
    d.reason = "alpha*beta > 1 and beta >= 1";
    return d;
  }
  // 0 < beta < 1: compare against max F_beta and max G_beta.
  const Rational tol(Integer(1), Integer(1000));
  EnclosureFunction F = [beta](const Enclosure& u, int p) { return f_beta(u, beta, p); };
  EnclosureFunction G = [beta](const Enclosure& u, int p) { return g_beta(u, beta, p); };
  d.max_F = unimodal_max(F, Rational(1, 100), 60, tol, precision).max;
  if (Enclosure(ab).less_than(*d.max_F)) {
    d.label = "not CM";
    d.reason = "0 < beta < 1 and alpha*beta < max F_beta";
    return d;
  }
  d.max_G = unimodal_max(G, Rational(1, 100), 60, tol, precision).max;
  if (ab < d.max_F->hi()) {
    d.label = "undetermined";
    d.reason = "alpha*beta overlaps the enclosure of max F_beta";
    return d;
  }
  if (d.max_G->hi() <= ab * beta) {
    d.label = "1";
    d.r = 1;
    d.constant = ab - 1;
    d.reason = "alpha*beta > 1, 0 < beta < 1 and alpha*beta^2 >= max G_beta";
    return d;
  }
  d.label = "undetermined";
  d.reason = "0 < beta < 1 and alpha*beta^2 is not above max G_beta";
  return d;
}

DegreeConditionsReport degree_conditions_check(const Rational& alpha, const Rational& beta,
                                               const std::vector<Rational>& grid, unsigned N,
                                               const CMCheckOptions& options) {
  DegreeConditionsReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.prediction = predict_degree(alpha, beta, 30);
  const CMExpression H = CMExpression::H(alpha, beta);
  if (rep.prediction.label == "not CM") {
    rep.above_degree = falsify_degree(H, 0, 1, 24, options.precision);
    rep.consistent = rep.above_degree->found;
    return rep;
  }
  if (!rep.prediction.r) return rep;
  const Rational r = *rep.prediction.r;
  // t^r H(t) at t = 10^4 should sit within 1% of the transform constant.
  const Rational big = 10000;
  rep.constant_check = H.times_power(r)(big, options.precision);
  const Rational c = *rep.prediction.constant;
  const bool constant_ok = rep.constant_check->lo() > c * frac(99, 100) && rep.constant_check->hi() < c * frac(101, 100);
  std::ostringstream name;
  name << "H_{" << to_string(alpha) << "," << to_string(beta) << "}";
  rep.at_degree = cm_check(H, r, N, grid, options, name.str());
  rep.above_degree = falsify_degree(H, r + frac(1, 2), 1, 24, options.precision);
  rep.consistent = constant_ok && rep.at_degree->summary == CellVerdict::pass && rep.above_degree->found;
  return rep;
}

// ---------------------------------------------------------------- V_n remarks

bool VnDegreeReport::ok() const {
  return assembly_n1 && assembly_n3 && check_n1.summary == CellVerdict::pass &&
         check_n3.summary == CellVerdict::pass && quadrature_agrees;
}

namespace {

// sum_{j<=J} 1/(j! t^j) from the exponential series, and the asymptotic
// polygamma' terms 1/t + 1/(2t^2) + sum_{k<=K} B_{2k}/t^{2k+1}.
CMExpression exp_partial(unsigned J) {
  CMExpression e;
  for (unsigned j = 0; j <= J; ++j) e += CMExpression::term(Rational(Integer(1), factorial(j)), -Rational(j));
  return e;
}

CMExpression trigamma_asymptotic(unsigned K) {
  CMExpression e = CMExpression::term(1, -1) + CMExpression::term(frac(1, 2), -2);
  for (unsigned k = 1; k <= K; ++k) e += CMExpression::term(bernoulli(2 * k), -Rational(2 * k + 1));
  return e;
}

// int_0^inf u^4 V_1(u) e^{-xu} du with V_1 truncated at N terms plus bounds.
Enclosure vn_quadrature(const Rational& x, int precision, const Rational& tol) {
  const unsigned N = 60;
  const Rational U = 16;
  PrecisionScope scope(bits_for_digits(precision));
  const Enclosure pi = pi_enclosure();
  std::vector<Enclosure> c2;  // (2 pi k)^2
  for (unsigned k = 1; k <= N; ++k) c2.push_back(sqr(Enclosure(2 * k) * pi));
  JetFunction f = [&](const Jet& u) {
    const std::size_t order = u.order();
    const Jet u2 = u * u;
    Jet s = Jet::constant(Enclosure(0), order);
    for (const auto& c : c2) s += Enclosure(2) * (u2 * u2) / ((u2 + Jet::constant(c, order)) * Jet::constant(c, order));
    return s * exp(u * Enclosure(-x), precision);
  };
  QuadratureResult q = integrate_simpson(f, 0, U, tol / 4);
  // k > N: integrand <= u^4 e^{-xu} sum_{k>N} 2/c_k^4, sum_{k>N} k^-4 <= 1/(3 N^3).
  const Enclosure pi4 = pow(pi, 4);
  const Rational kx = (24 / pow(x, 5)) * 2 / (16 * pi4.lo()) / (3 * pow(Rational(N), 3));
  // u > U: S_N(u) <= u^2/12.
  const Enclosure decay = exp_enclosure(-x * U, precision);
  const Rational ux = decay.hi() / 12 * (U * U / x + 2 * U / (x * x) + 2 / pow(x, 3));
  return q.value + Enclosure(0, kx + ux);
}

}  // namespace

VnDegreeReport remark_vn_degree_check(const std::vector<Rational>& grid, const CMCheckOptions& options) {
  VnDegreeReport rep;
  const CMExpression H = CMExpression::H(1, 1);
  const CMExpression psi1 = CMExpression::term(1, 0, Atom::psi(1));
  const CMExpression ex = CMExpression::term(1, 0, Atom::exponential(1));

  // n = 1: x^2 [asymptotic - psi'] + x^2 [e^{1/x} - partial] = x^2 H.
  const CMExpression a1 = (trigamma_asymptotic(1) - psi1).times_power(2);
  const CMExpression b1 = (ex - exp_partial(3)).times_power(2);
  rep.assembly_n1 = a1 + b1 == H.times_power(2);

  // n = 3: the same with three Bernoulli terms and the exponential through 1/(7! x^7).
  const CMExpression a3 = (trigamma_asymptotic(3) - psi1).times_power(4);
  const CMExpression b3 = (ex - exp_partial(7)).times_power(4);
  rep.remainder_n3 = a3 + b3 - H.times_power(4);
  const CMExpression stated = CMExpression::term(frac(-1, 24), 0) + CMExpression::term(frac(-1, 24), -1) +
                              CMExpression::term(frac(-1, 720), -2) + CMExpression::term(frac(17, 720), -3);
  rep.assembly_n3 = rep.remainder_n3 == stated;

  rep.check_n1 = cm_check(H, 2, 6, grid, options, "x^2[e^{1/x}-1-psi'(x)]");
  const CMExpression final3 = H.times_power(4) + CMExpression::term(frac(-1, 24), 0) +
                              CMExpression::term(frac(17, 720), -3);
  rep.check_n3 = cm_check(final3, 0, 6, grid, options, "x^4[e^{1/x}-1-psi'(x)]-1/24+17/(6!x^3)");

  const Rational x = 2;
  const Rational tol(Integer(1), Integer(1000000));
  rep.quadrature = vn_quadrature(x, 30, tol);
  const Enclosure p = polygamma(1, x, 30);
  {
    PrecisionScope s(bits_for_digits(30));
    rep.direct = Enclosure(frac(1, 2) + frac(1, 8) + frac(1, 48)) - p;
  }
  rep.quadrature_agrees = widen(rep.quadrature, tol).overlaps(rep.direct) && rep.quadrature.width() <= tol;
  return rep;
}

}  // namespace besselcm
