#include "besselcm/seriesratio.hpp"

#include <algorithm>
#include <stdexcept>

#include "besselcm/expring.hpp"
#include "besselcm/parallel.hpp"
#include "besselcm/specfun.hpp"

namespace besselcm {

namespace {

void require_positive(const Enclosure& u, const Rational& beta, const char* who) {
  if (sgn(u.lo()) <= 0 || sgn(beta) <= 0) throw std::domain_error(std::string(who) + ": arguments must be positive");
}

Integer ipow(long base, unsigned long e) { return pow(Integer(base), e); }

Rational frac(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

// ---------------------------------------------------------------- functions

Enclosure h_k_beta(unsigned k, const Enclosure& u, const Rational& beta, int precision) {
  require_positive(u, beta, "h_k_beta");
  if (k < 1) throw std::domain_error("h_k_beta: k must be at least 1");
  const int digits = precision + 5;
  Enclosure kernel = kernel_evaluator(k - 1)(u, digits);
  Enclosure bessel = bessel_ratio(k, u * Enclosure(beta), digits);
  PrecisionScope scope(bits_for_digits(digits));
  return kernel / bessel;
}

Enclosure f_beta(const Enclosure& u, const Rational& beta, int precision) {
  require_positive(u, beta, "f_beta");
  return h_k_beta(1, u, beta, precision);
}

Enclosure g_beta(const Enclosure& u, const Rational& beta, int precision) {
  require_positive(u, beta, "g_beta");
  return h_k_beta(2, u, beta, precision);
}

// ---------------------------------------------------------------- sequences

Rational p_coeff(unsigned k) {
  return frac(ipow(2, k + 2) - k - 3, factorial(k + 2));
}

Polynomial q_coeff(unsigned k) {
  std::vector<Rational> c(k + 1);
  const Integer kf = factorial(k + 2);
  for (unsigned l = 0; l <= k; ++l) c[l] = frac(binomial(k + 2, l) * (ipow(2, k - l + 2) - 2), kf * factorial(l + 2));
  return Polynomial(std::move(c));
}

Rational c_coeff(unsigned k, const Rational& beta) { return q_coeff(k)(beta) / p_coeff(k); }

Integer ladder_U(unsigned k) {
  const Integer kk(k);
  return ipow(3, k + 4) - (kk + 6) * ipow(2, k + 4) + kk * kk + 9 * kk + 21;
}

Integer ladder_V(unsigned k, unsigned l) {
  const Integer K(k), L(l);
  return ipow(3, k - l + 5) * L + ipow(2, k - l + 3) * (L * L - 17 * L - 5 * K - K * K) - 2 * L * L + 2 * K * L +
         17 * L - 4 * K - 20;
}

Integer ladder_W(unsigned k, unsigned m) {
  const Integer K(k), M(m);
  return (K - M) * ipow(3, m + 5) + (M * M + (17 - 2 * K) * M - 22 * K) * ipow(2, m + 3) - 2 * M * M +
         (2 * K - 17) * M + 13 * K - 20;
}

Rational lambda_coeff(unsigned k) { return frac(ladder_U(k), factorial(k + 4)); }

Polynomial xi_coeff(unsigned k) {
  std::vector<Rational> c(k + 2);
  const Integer kf = factorial(k + 4);
  for (unsigned l = 0; l <= k; ++l) {
    const unsigned j = k - l;
    const Integer J(j);
    const Integer lead = ipow(3, j + 4) - (J + 10) * ipow(2, j + 3) + 2 * J + 11;
    const Integer rest = Integer(l + 3) * (J * ipow(2, j + 3) + 4);
    const Integer den = kf * factorial(l + 3);
    const Integer w = binomial(k + 4, l);
    c[l + 1] += frac(w * lead, den);
    c[l] -= frac(w * rest, den);
  }
  return Polynomial(std::move(c));
}

Polynomial C_coeff(unsigned k) { return xi_coeff(k) / lambda_coeff(k); }

Rational theta(unsigned k, unsigned l) {
  const Integer U = ladder_U(k);
  if (l == 0) return frac(-2 * (ipow(2, k + 1) * k + 1), U);
  if (l == k + 1) return frac(Integer(k + 4), 2 * factorial(k) * U);
  if (l > k + 1) return 0;
  return frac(factorial(k + 4) * ladder_V(k, l), factorial(l) * factorial(l + 2) * factorial(k - l + 5) * U);
}

Integer ladder_A(unsigned m) {
  const Integer M(m);
  return (4 * M * M * M + 86 * M * M + 442 * M + 276) * ipow(2, m + 3) + (M * M + 25 * M + 150) * ipow(4, m + 5) -
         2 * (4 * M * M + 40 * M + 87) * ipow(3, m + 5) + ipow(9, m + 6) +
         (M * M + M - 102) * ipow(2, m + 4) * ipow(3, m + 5) + 4 * M * M + 64 * M + 249;
}

Integer ladder_B(unsigned m) {
  const Integer M(m);
  const Integer M2 = M * M, M3 = M2 * M, M4 = M3 * M;
  return 2 * (8 * M3 + 92 * M2 + 282 * M + 207) * ipow(3, m + 5) - (2 * M + 1) * ipow(9, m + 6) -
         (6 * M4 + 145 * M3 + 839 * M2 + 592 * M - 1524) * ipow(2, m + 3) -
         (M3 + 31 * M2 + 234 * M + 108) * ipow(4, m + 5) - (M3 + 5 * M2 - 96 * M - 12) * ipow(2, m + 3) * ipow(3, m + 6) -
         (8 * M3 + 148 * M2 + 794 * M + 1065);
}

Integer ladder_C(unsigned m) {
  const Integer M(m);
  const Integer M2 = M * M, M3 = M2 * M, M4 = M3 * M, M5 = M4 * M;
  return (2 * M5 + 57 * M4 + 388 * M3 + 585 * M2 + 480 * M + 2988) * ipow(2, m + 3) +
         (M4 + 36 * M3 + 323 * M2 + 12 * M - 756) * ipow(4, m + 4) + 4 * M4 + 84 * M3 + 569 * M2 + 1401 * M + 1152 +
         (M4 + 10 * M3 - 99 * M2 + 24 * M + 252) * ipow(2, m + 3) * ipow(3, m + 5) + M * (M + 1) * ipow(9, m + 6) -
         2 * (4 * M4 + 52 * M3 + 207 * M2 + 327 * M + 288) * ipow(3, m + 5);
}

Integer ladder_M(unsigned m, unsigned k) {
  return Integer(m + 7) * ladder_W(k + 1, m + 1) * ladder_W(k, m + 1) -
         Integer(m + 6) * ladder_W(k + 1, m + 2) * ladder_W(k, m);
}

namespace {

MonotoneSequence monotone(std::vector<Rational> values) {
  MonotoneSequence s;
  s.values = std::move(values);
  s.strict = true;
  for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
    if (!(s.values[k + 1] > s.values[k])) s.strict = false;
    if (s.values[k + 1] < s.values[k]) {
      s.first_failure = static_cast<unsigned>(k);
      break;
    }
  }
  s.increasing = !s.first_failure;
  if (!s.increasing) s.strict = false;
  return s;
}

}  // namespace

MonotoneSequence c_ratio_sequence(const Rational& beta, unsigned K) {
  if (sgn(beta) <= 0) throw std::domain_error("c_ratio_sequence: beta must be positive");
  std::vector<Rational> v(K + 1);
  for (unsigned k = 0; k <= K; ++k) v[k] = c_coeff(k, beta);
  return monotone(std::move(v));
}

MonotoneSequence C_ratio_sequence(const Rational& beta, unsigned K) {
  if (sgn(beta) <= 0) throw std::domain_error("C_ratio_sequence: beta must be positive");
  std::vector<Rational> v(K + 1);
  for (unsigned k = 0; k <= K; ++k) v[k] = xi_coeff(k)(beta) / lambda_coeff(k);
  return monotone(std::move(v));
}

LadderReport ladder_check(unsigned k_max) {
  if (k_max < 6) throw std::invalid_argument("ladder_check: k_max must be at least 6");
  LadderReport rep;
  rep.k_max = k_max;
  auto check = [&](bool ok, const char* name, unsigned k, unsigned idx) {
    ++rep.checks;
    if (!ok) rep.failures.push_back({name, k, idx});
  };

  for (unsigned k = 0; k <= k_max + 1; ++k) {
    // closed form of C_k against xi_k/lambda_k
    const Polynomial direct = C_coeff(k);
    bool same = direct.degree() <= static_cast<int>(k + 1);
    for (unsigned l = 0; same && l <= k + 1; ++l) same = direct.coefficient(l) == theta(k, l);
    check(same, "C_k closed form", k, 0);
    for (unsigned l = 0; l <= k; ++l) check(ladder_W(k, k - l) == ladder_V(k, l), "W_k(k-l) = V_k(l)", k, l);
  }
  for (unsigned k = 4; k <= k_max; ++k) {
    for (unsigned l = 0; l <= k + 1; ++l) check(theta(k + 1, l) >= theta(k, l), "theta_{k+1,l} >= theta_{k,l}", k, l);
    for (unsigned m = 0; m + 2 <= k; ++m) {
      const Integer M = ladder_M(m, k);
      const Integer K(k);
      check(M == ladder_A(m) * K * K + ladder_B(m) * K + ladder_C(m), "M_m(k) = A k^2 + B k + C", k, m);
      check(sgn(M) >= 0, "M_m(k) >= 0", k, m);
    }
    check(frac(ladder_U(k + 1), ladder_U(k)) <= frac(ladder_V(k + 1, 1), ladder_V(k, 1)),
          "U_{k+1}/U_k <= V_{k+1}(1)/V_k(1)", k, 1);
    const Integer K(k);
    check(ladder_M(0, k) == 3360 * (54 - 137 * K + 74 * K * K) && sgn(ladder_M(0, k)) > 0, "M_0 seed", k, 0);
    check(ladder_M(1, k) == 1568 * (6480 - 7306 * K + 1909 * K * K) && sgn(ladder_M(1, k)) > 0, "M_1 seed", k, 1);
    check(ladder_M(2, k) == 336 * (750942 - 549881 * K + 95837 * K * K) && sgn(ladder_M(2, k)) > 0, "M_2 seed", k, 2);
  }
  for (unsigned m = 0; m <= k_max; ++m) {
    check(sgn(ladder_A(m)) > 0, "A(m) > 0", 0, m);
    check(sgn(ladder_B(m)) < 0, "B(m) < 0", 0, m);
    check(sgn(ladder_C(m)) > 0, "C(m) > 0", 0, m);
  }
  for (unsigned m = 0; m <= 5; ++m) rep.C_values.push_back(ladder_C(m));
  return rep;
}

// ---------------------------------------------------------------- searches

namespace {

// Snap to a multiple of `quantum`, keeping points short.
Rational snap(const Rational& x, const Rational& quantum) {
  Rational q = x / quantum;
  Integer n;
  mpz_fdiv_q(n.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Rational(n) * quantum;
}

// -1 if a < b, +1 if a > b, 0 if they overlap.
int compare(const Enclosure& a, const Enclosure& b) {
  if (a.less_than(b)) return -1;
  if (b.less_than(a)) return 1;
  return 0;
}

}  // namespace

UnimodalResult unimodal_max(const EnclosureFunction& f, const Rational& lo, const Rational& hi, const Rational& tol,
                            int precision, int precision_cap) {
  if (!(lo < hi)) throw std::invalid_argument("unimodal_max: need lo < hi");
  if (sgn(tol) <= 0) throw std::invalid_argument("unimodal_max: tol must be positive");
  UnimodalResult res;
  res.precision = precision;
  const Rational quantum = tol / 64;
  const Rational g = parse_rational("0.38196601125");  // 1 - 1/phi
  Rational a = lo, b = hi;
  Rational best_lo;
  bool have_best = false;
  auto eval = [&](const Rational& x) {
    ++res.evaluations;
    Enclosure v = f(Enclosure(x), res.precision);
    if (!have_best || v.lo() > best_lo) {
      best_lo = v.lo();
      have_best = true;
    }
    return v;
  };
  Rational c = snap(a + g * (b - a), quantum), d = snap(b - g * (b - a), quantum);
  Enclosure fc = eval(c), fd = eval(d);
  while (b - a > tol) {
    if (!(a < c && c < d && d < b)) {
      // bracket too small for distinct snapped points
      c = a + (b - a) / 3;
      d = b - (b - a) / 3;
      fc = eval(c);
      fd = eval(d);
    }
    int cmp = compare(fc, fd);
    while (cmp == 0 && res.precision * 2 <= precision_cap) {
      res.precision *= 2;
      fc = eval(c);
      fd = eval(d);
      cmp = compare(fc, fd);
    }
    if (cmp == 0) break;
    if (cmp < 0) {  // max in [c, b]
      a = c;
      c = d;
      fc = fd;
      d = snap(b - g * (b - a), quantum);
      if (d <= c) d = (c + b) / 2;
      fd = eval(d);
    } else {  // max in [a, d]
      b = d;
      d = c;
      fd = fc;
      c = snap(a + g * (b - a), quantum);
      if (c >= d) c = (a + d) / 2;
      fc = eval(c);
    }
  }
  res.converged = b - a <= tol;
  res.argmax = Enclosure(a, b);
  Enclosure over = f(res.argmax, res.precision);
  res.max = Enclosure(std::min(best_lo, over.hi()), over.hi());
  return res;
}

SlopeScan scan_slopes(const EnclosureFunction& f, const std::vector<Rational>& grid, int precision,
                      int precision_cap, unsigned threads) {
  SlopeScan scan;
  const std::size_t n = grid.size();
  scan.values.assign(n, Enclosure(0));
  std::vector<int> digits(n, precision);
  parallel_for(n, threads, [&](std::size_t i) { scan.values[i] = f(Enclosure(grid[i]), precision); });
  scan.signs.assign(n > 0 ? n - 1 : 0, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    int cmp = compare(scan.values[i + 1], scan.values[i]);
    while (cmp == 0 && std::max(digits[i], digits[i + 1]) * 2 <= precision_cap) {
      const int p = std::max(digits[i], digits[i + 1]) * 2;
      scan.values[i] = f(Enclosure(grid[i]), p);
      scan.values[i + 1] = f(Enclosure(grid[i + 1]), p);
      digits[i] = digits[i + 1] = p;
      cmp = compare(scan.values[i + 1], scan.values[i]);
    }
    scan.signs[i] = cmp;
    if (cmp == 0) scan.definite = false;
  }
  int last = 0;
  for (int s : scan.signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++scan.sign_changes;
    last = s;
  }
  return scan;
}

}  // namespace besselcm
