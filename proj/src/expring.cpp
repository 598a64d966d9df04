#include "besselcm/expring.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "besselcm/exactpoly.hpp"
#include "besselcm/specfun.hpp"

namespace besselcm {

namespace {

const Polynomial& u_poly() {
  static const Polynomial u = Polynomial::identity();
  return u;
}

ExpPoly e_minus_one() {
  return ExpPoly(std::map<unsigned, Polynomial>{{0, Polynomial::constant(-1)}, {1, Polynomial::constant(1)}});
}

}  // namespace

// ---------------------------------------------------------------- ExpPoly

ExpPoly::ExpPoly(std::map<unsigned, Polynomial> terms) : terms_(std::move(terms)) { normalize(); }

ExpPoly ExpPoly::term(unsigned frequency, Polynomial p) {
  return ExpPoly(std::map<unsigned, Polynomial>{{frequency, std::move(p)}});
}

void ExpPoly::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

Polynomial ExpPoly::coefficient(unsigned frequency) const {
  auto it = terms_.find(frequency);
  return it == terms_.end() ? Polynomial() : it->second;
}

ExpPoly ExpPoly::derivative() const {
  std::map<unsigned, Polynomial> d;
  for (const auto& [i, p] : terms_) d[i] = p.derivative() + p * Rational(i);
  return ExpPoly(std::move(d));
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& b) {
  for (const auto& [i, p] : b.terms_) terms_[i] += p;
  normalize();
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& b) {
  for (const auto& [i, p] : b.terms_) terms_[i] -= p;
  normalize();
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  std::map<unsigned, Polynomial> r;
  for (const auto& [i, p] : a.terms_)
    for (const auto& [j, q] : b.terms_) r[i + j] += p * q;
  return ExpPoly(std::move(r));
}

ExpPoly operator*(ExpPoly a, const Polynomial& p) {
  for (auto& [i, q] : a.terms_) q *= p;
  a.normalize();
  return a;
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly r = *this;
  for (auto& [i, p] : r.terms_) p = -p;
  return r;
}

Rational ExpPoly::at_zero() const {
  Rational s = 0;
  for (const auto& [i, p] : terms_) s += p.coefficient(0);
  return s;
}

Polynomial ExpPoly::at_unit_exponential() const {
  Polynomial s;
  for (const auto& [i, p] : terms_) s += p;
  return s;
}

ExpPoly ExpPoly::divided_by_exponential() const {
  if (terms_.count(0)) throw std::domain_error("ExpPoly not divisible by e^u");
  std::map<unsigned, Polynomial> r;
  for (const auto& [i, p] : terms_) r[i - 1] = p;
  return ExpPoly(std::move(r));
}

std::optional<ExpPoly> ExpPoly::divided_by_exponential_minus_one() const {
  if (terms_.empty() || !at_unit_exponential().is_zero()) return std::nullopt;
  // P(E) = (E - 1) Q(E) with q_k = sum_{i>k} p_i.
  std::map<unsigned, Polynomial> q;
  Polynomial running;
  for (unsigned i = max_frequency(); i >= 1; --i) {
    running += coefficient(i);
    q[i - 1] = running;
  }
  return ExpPoly(std::move(q));
}

std::string ExpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [i, p] = *it;
    if (!first) os << " + ";
    first = false;
    const bool unit = p == Polynomial::constant(1);
    if (i == 0) {
      os << p.to_string("u");
      continue;
    }
    if (!unit) os << "(" << p.to_string("u") << ")";
    os << "e^{" << (i == 1 ? std::string() : std::to_string(i)) << "u}";
  }
  return os.str();
}

// ---------------------------------------------------------------- quotient

ExpPolyQuotient::ExpPolyQuotient(ExpPoly numerator, unsigned pole_order)
    : num_(std::move(numerator)), m_(pole_order) {
  if (num_.is_zero()) {
    m_ = 0;
    return;
  }
  while (m_ > 0) {
    auto q = num_.divided_by_exponential_minus_one();
    if (!q) break;
    num_ = std::move(*q);
    --m_;
  }
}

namespace {

ExpPoly times_e_minus_one_power(ExpPoly p, unsigned k) {
  const ExpPoly f = e_minus_one();
  for (unsigned j = 0; j < k; ++j) p = p * f;
  return p;
}

}  // namespace

ExpPolyQuotient operator+(const ExpPolyQuotient& a, const ExpPolyQuotient& b) {
  const unsigned m = std::max(a.m_, b.m_);
  return ExpPolyQuotient(times_e_minus_one_power(a.num_, m - a.m_) + times_e_minus_one_power(b.num_, m - b.m_), m);
}

ExpPolyQuotient operator-(const ExpPolyQuotient& a, const ExpPolyQuotient& b) {
  const unsigned m = std::max(a.m_, b.m_);
  return ExpPolyQuotient(times_e_minus_one_power(a.num_, m - a.m_) - times_e_minus_one_power(b.num_, m - b.m_), m);
}

ExpPolyQuotient operator*(const ExpPolyQuotient& a, const ExpPolyQuotient& b) {
  return ExpPolyQuotient(a.num_ * b.num_, a.m_ + b.m_);
}

std::string ExpPolyQuotient::to_string() const {
  if (m_ == 0) return num_.to_string();
  std::string den = m_ == 1 ? "(e^u - 1)" : "(e^u - 1)^" + std::to_string(m_);
  return "[" + num_.to_string() + "] / " + den;
}

ExpPolyQuotient differentiate(const ExpPolyQuotient& f) {
  const unsigned m = f.pole_order();
  if (m == 0) return ExpPolyQuotient(f.numerator().derivative(), 0);
  // (N/(E-1)^m)' = [N'(E-1) - m E N] / (E-1)^{m+1}
  const ExpPoly& n = f.numerator();
  ExpPoly e_n = ExpPoly::term(1, Polynomial::constant(1)) * n;
  ExpPoly num = n.derivative() * e_minus_one() - e_n * Polynomial::constant(m);
  return ExpPolyQuotient(std::move(num), m + 1);
}

ExpPolyQuotient kernel_derivative(unsigned k) {
  ExpPolyQuotient f(ExpPoly::term(1, u_poly()), 1);
  for (unsigned j = 0; j < k; ++j) f = differentiate(f);
  return f;
}

// ---------------------------------------------------------------- series

namespace {

std::vector<Rational> series_mul(const std::vector<Rational>& a, const std::vector<Rational>& b, std::size_t L) {
  std::vector<Rational> r(L);
  for (std::size_t i = 0; i < std::min(L, a.size()); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; i + j < L && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

}  // namespace

std::vector<Rational> series_at_zero(const ExpPolyQuotient& f, unsigned N) {
  const unsigned m = f.pole_order();
  const std::size_t L = static_cast<std::size_t>(N) + m;
  std::vector<Rational> inv_fact(L + 1);
  {
    Integer fact = 1;
    for (std::size_t j = 0; j <= L; ++j) {
      if (j > 0) fact *= static_cast<unsigned long>(j);
      inv_fact[j] = Rational(Integer(1), fact);
      inv_fact[j].canonicalize();
    }
  }
  std::vector<Rational> num(L);
  for (const auto& [i, p] : f.numerator().terms()) {
    std::vector<Rational> e(L);
    Rational ipow = 1;
    for (std::size_t j = 0; j < L; ++j) {
      e[j] = ipow * inv_fact[j];
      ipow *= i;
    }
    auto prod = series_mul(p.coefficients(), e, L);
    for (std::size_t j = 0; j < L; ++j) num[j] += prod[j];
  }
  if (m == 0) {
    num.resize(N);
    return num;
  }
  std::size_t valuation = 0;
  while (valuation < L && sgn(num[valuation]) == 0) ++valuation;
  if (valuation < m)
    throw std::domain_error("series_at_zero: pole of order " + std::to_string(m - valuation) + " at 0");
  // (e^u - 1)^m = u^m d(u), d = ((e^u - 1)/u)^m
  std::vector<Rational> base(N);
  for (std::size_t j = 0; j < N; ++j) base[j] = inv_fact[j + 1];
  std::vector<Rational> d(N);
  if (N > 0) d[0] = 1;
  for (unsigned k = 0; k < m; ++k) d = series_mul(d, base, N);
  std::vector<Rational> out(N);
  for (std::size_t k = 0; k < N; ++k) {
    Rational acc = num[k + m];
    for (std::size_t i = 1; i <= k; ++i) acc -= d[i] * out[k - i];
    out[k] = acc;  // d[0] = 1
  }
  return out;
}

// ---------------------------------------------------------------- evaluation

ExpPolyEvaluator::ExpPolyEvaluator(ExpPolyQuotient f) : f_(std::move(f)) {
  // |p_i(u)| <= sum |coeff| and |e^{iu}| <= e^i on |u| = 1; there |e^u - 1| >= 3 - e.
  const Rational e_hi(27183, 10000);
  const Rational gap_lo(2817, 10000);
  Rational bound = 0;
  for (const auto& [i, p] : f_.numerator().terms()) {
    Rational s = 0;
    for (const auto& c : p.coefficients()) s += abs(c);
    bound += s * pow(e_hi, static_cast<long>(i));
  }
  bound_ = bound / pow(gap_lo, static_cast<long>(f_.pole_order()));
  try {
    (void)series_at_zero(f_, 1);
  } catch (const std::domain_error&) {
    analytic_at_zero_ = false;
  }
}

std::vector<Rational> ExpPolyEvaluator::coefficients(unsigned N) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (series_.size() < N) series_ = series_at_zero(f_, N);
  return std::vector<Rational>(series_.begin(), series_.begin() + N);
}

Enclosure ExpPolyEvaluator::near_zero(const Enclosure& u, int precision) const {
  if (!analytic_at_zero_) throw std::domain_error("near_zero: pole at 0");
  const Rational quarter(1, 4);
  if (!(u.lo() > -quarter && u.hi() < quarter)) throw std::domain_error("near_zero: argument outside (-1/4, 1/4)");
  const double log2_bound = sgn(bound_) > 0 ? std::log2(to_double(bound_)) : 0.0;
  const double need = (log2_bound + (precision + 2) * 3.3219280948873622 + 1.0) / 2.0;
  const unsigned N = static_cast<unsigned>(std::max(4.0, std::ceil(need) + 1));
  const std::vector<Rational> c = coefficients(N);
  // sum_{k>=N} bound * 4^{-k} = bound * 4^{-N} * 4/3
  const Rational tail = bound_ * pow(quarter, static_cast<long>(N)) * Rational(4, 3);
  PrecisionScope scope(bits_for_digits(precision + 2) + 16);
  return widen(evaluate(Polynomial(c), u), tail);
}

Enclosure ExpPolyEvaluator::direct(const Enclosure& u, int precision) const {
  if (sgn(u.lo()) <= 0) throw std::domain_error("ExpPolyQuotient evaluation needs u > 0");
  const unsigned m = f_.pole_order();
  const double ulo = to_double(u.lo());
  int extra = 10 + static_cast<int>(m * std::max(0.0, -std::log10(ulo)));
  const Rational target = pow(Rational(10), -static_cast<long>(precision));
  const unsigned top = f_.numerator().max_frequency();
  Enclosure value;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const int digits = precision + extra;
    const Enclosure E = exp_enclosure(u, digits);
    PrecisionScope scope(bits_for_digits(digits) + 16);
    Enclosure acc(0);
    for (unsigned i = top + 1; i-- > 0;) {
      acc = acc * E;
      auto it = f_.numerator().terms().find(i);
      if (it != f_.numerator().terms().end()) acc += evaluate(it->second, u);
    }
    value = m == 0 ? acc : acc / pow(E - Enclosure(1), m);
    if (!u.is_point()) return value;
    Rational mag = std::max(abs(value.lo()), abs(value.hi()));
    if (value.width() <= target * mag || value.is_point()) return value;
    extra = 2 * extra + 20;
  }
  return value;
}

Enclosure ExpPolyEvaluator::operator()(const Rational& u, int precision) const {
  if (sgn(u) <= 0) throw std::domain_error("ExpPolyQuotient evaluation needs u > 0");
  return direct(Enclosure(u), precision);
}

Enclosure ExpPolyEvaluator::operator()(const Enclosure& u, int precision) const {
  if (sgn(u.lo()) > 0) return direct(u, precision);
  if (sgn(u.lo()) == 0 && u.hi() < Rational(1, 4)) return near_zero(u, precision);
  throw std::domain_error("ExpPolyQuotient evaluation needs u >= 0 and, near 0, u < 1/4");
}

const ExpPolyEvaluator& kernel_evaluator(unsigned k) {
  static const std::deque<ExpPolyEvaluator> table = [] {
    std::deque<ExpPolyEvaluator> t;
    ExpPolyQuotient f = kernel_derivative(0);
    for (unsigned j = 0; j < 32; ++j) {
      t.emplace_back(f);
      f = differentiate(f);
    }
    return t;
  }();
  if (k >= table.size()) throw std::out_of_range("kernel_evaluator: order too large");
  return table[k];
}

Enclosure eval_enclosure(const ExpPolyQuotient& f, const Rational& u, int precision) {
  return ExpPolyEvaluator(f)(u, precision);
}

Enclosure eval_enclosure(const ExpPolyQuotient& f, const Enclosure& u, int precision) {
  return ExpPolyEvaluator(f)(u, precision);
}

Jet eval_jet(const ExpPolyQuotient& f, const Jet& u, int precision) {
  const std::size_t order = u.order();
  const Jet E = exp(u, precision);
  auto poly_jet = [&](const Polynomial& p) {
    Jet acc = Jet::constant(Enclosure(0), order);
    const auto& c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + Jet::constant(Enclosure(*it), order);
    return acc;
  };
  Jet acc = Jet::constant(Enclosure(0), order);
  const unsigned top = f.numerator().max_frequency();
  for (unsigned i = top + 1; i-- > 0;) {
    acc = acc * E;
    auto it = f.numerator().terms().find(i);
    if (it != f.numerator().terms().end()) acc += poly_jet(it->second);
  }
  if (f.pole_order() == 0) return acc;
  Jet em1 = E - Jet::constant(Enclosure(1), order);
  Jet den = Jet::constant(Enclosure(1), order);
  for (unsigned j = 0; j < f.pole_order(); ++j) den = den * em1;
  return acc / den;
}

// ---------------------------------------------------------------- F chain

FChain build_F_chain() {
  const Polynomial u = u_poly();
  auto P = [](std::initializer_list<Rational> c) { return Polynomial(c); };
  ExpPoly bracket(std::map<unsigned, Polynomial>{
      {3, P({-4, 1})}, {2, P({-12, 11})}, {1, P({12, 11})}, {0, P({4, 1})}});
  ExpPoly E5 = times_e_minus_one_power(ExpPoly::polynomial(Polynomial::constant(1)), 5);
  FChain c;
  c.F1 = E5 * P({6, 1}) - ExpPoly::term(1, Polynomial::constant(720)) * bracket;
  c.F1p = c.F1.derivative();
  c.F1pp = c.F1p.derivative();
  try {
    c.F2 = (c.F1pp * Polynomial::constant(Rational(1, 5))).divided_by_exponential();
    c.F2p = c.F2.derivative();
    c.F2pp = c.F2p.derivative();
    c.F3 = (c.F2pp * Polynomial::constant(Rational(1, 8))).divided_by_exponential();
  } catch (const std::domain_error&) {
    throw std::logic_error("F chain: second derivative does not carry the factor e^u");
  }
  c.zeros = {{"F3(0)", c.F3.at_zero()},    {"F2''(0)", c.F2pp.at_zero()}, {"F2'(0)", c.F2p.at_zero()},
             {"F2(0)", c.F2.at_zero()},    {"F1''(0)", c.F1pp.at_zero()}, {"F1'(0)", c.F1p.at_zero()},
             {"F1(0)", c.F1.at_zero()}};
  for (const auto& [name, v] : c.zeros)
    if (sgn(v) != 0) throw std::logic_error("F chain: " + name + " = " + besselcm::to_string(v) + ", expected 0");
  return c;
}

F4Build build_F4_via_pade() {
  const FChain chain = build_F_chain();
  const ExpBounds b = lemma1_exp_bounds(2, 3);
  F4Build out;
  out.lower_num = b.lower_num;
  out.lower_den = b.lower_den;
  out.upper_num = b.upper_num;
  out.upper_den = b.upper_den;
  // Positive coefficients take the lower bound of E^i, negative ones the upper.
  unsigned a = 0, c = 0;
  for (const auto& [i, p] : chain.F3.terms()) {
    if (i == 0) continue;
    for (const auto& coef : p.coefficients()) {
      if (sgn(coef) > 0) a = std::max(a, i);
      if (sgn(coef) < 0) c = std::max(c, i);
    }
  }
  Polynomial num;
  for (const auto& [i, p] : chain.F3.terms()) {
    const auto& coefs = p.coefficients();
    for (std::size_t j = 0; j < coefs.size(); ++j) {
      const Rational& coef = coefs[j];
      if (sgn(coef) == 0) continue;
      Polynomial t = Polynomial::monomial(coef, j);
      if (i == 0)
        t *= b.lower_den.pow(a) * b.upper_den.pow(c);
      else if (sgn(coef) > 0)
        t *= b.lower_num.pow(i) * b.lower_den.pow(a - i) * b.upper_den.pow(c);
      else
        t *= b.upper_num.pow(i) * b.upper_den.pow(c - i) * b.lower_den.pow(a);
      num += t;
    }
  }
  auto [q, r] = divmod(num, Polynomial::monomial(6, 1));
  if (!r.is_zero()) throw std::logic_error("F4 construction: numerator not divisible by 6u");
  out.F4 = q;
  out.denominator = b.upper_den.pow(c) * b.lower_den.pow(a);
  return out;
}

std::optional<std::size_t> first_difference(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coefficients().size(), b.coefficients().size());
  for (std::size_t k = 0; k < n; ++k)
    if (a.coefficient(k) != b.coefficient(k)) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------- remark

bool DecompositionReport::all_pass() const {
  if (!identity_holds) return false;
  return std::all_of(rows.begin(), rows.end(), [](const DecompositionRow& r) { return r.nonnegative; });
}

DecompositionReport remark_decomposition_check(const std::vector<Rational>& grid, int precision) {
  auto P = [](std::initializer_list<Rational> c) { return Polynomial(c); };
  // f1 = [10u(E - 261) + 3966] E^2, f2 = (69E^2 - 7119u - 4035) E, f3 = 3249E^2 - 793u - 3249
  ExpPoly f1(std::map<unsigned, Polynomial>{{3, P({0, 10})}, {2, P({3966, -2610})}});
  ExpPoly f2(std::map<unsigned, Polynomial>{{3, P({69})}, {1, P({-4035, -7119})}});
  ExpPoly f3(std::map<unsigned, Polynomial>{{2, P({3249})}, {0, P({-3249, -793})}});
  DecompositionReport rep;
  rep.identity_holds = (f1 + f2 + f3) == build_F_chain().F3;
  const struct {
    const char* name;
    ExpPoly d;
    Rational from;
  } parts[] = {{"f1'", f1.derivative(), 5}, {"f2'", f2.derivative(), 3}, {"f3'", f3.derivative(), 0}};
  for (const auto& part : parts) {
    for (const auto& u : grid) {
      if (u < part.from) continue;
      DecompositionRow row{part.name, u, Enclosure(0), false};
      row.value = sgn(u) == 0 ? Enclosure(part.d.at_zero()) : eval_enclosure(part.d, u, precision);
      row.nonnegative = row.value.nonnegative();
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace besselcm
