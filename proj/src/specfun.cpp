#include "besselcm/specfun.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace besselcm {

namespace {

std::atomic<std::size_t> g_term_cap{kTermCap};

Rational two_pow(long e) { return pow(Rational(2), e); }

Rational ten_pow(long e) { return pow(Rational(10), e); }

Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

std::size_t term_cap() { return g_term_cap.load(std::memory_order_relaxed); }
void set_term_cap(std::size_t cap) { g_term_cap.store(cap < 16 ? 16 : cap, std::memory_order_relaxed); }

// ---------------------------------------------------------------- Bernoulli

namespace {

std::shared_mutex bernoulli_mutex;
std::vector<Rational> bernoulli_table{Rational(1)};

}  // namespace

Rational bernoulli(unsigned n) {
  {
    std::shared_lock lock(bernoulli_mutex);
    if (n < bernoulli_table.size()) return bernoulli_table[n];
  }
  std::unique_lock lock(bernoulli_mutex);
  auto& b = bernoulli_table;
  while (b.size() <= n) {
    const unsigned long m = b.size();
    if (m >= 3 && m % 2 == 1) {
      b.emplace_back(0);
      continue;
    }
    Rational s = 0;
    for (unsigned long k = 0; k < m; ++k)
      if (sgn(b[k]) != 0) s += b[k] * binomial(m + 1, k);
    b.push_back(-s / Rational(m + 1));
  }
  return b[n];
}

// ---------------------------------------------------------------- pi, exp, log

Enclosure pi_enclosure() {
  static const Enclosure pi = [] {
    const char* digits =
        "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664";
    Rational lo = parse_rational(digits);
    return Enclosure(lo, lo + ten_pow(-117));
  }();
  return pi;
}

namespace {

Enclosure exp_nonnegative(const Rational& x, int precision) {
  if (sgn(x) == 0) return Enclosure(1);
  long halvings = 0;
  Rational y = x;
  const Rational half = ratio(1, 2);
  while (y > half) {
    y /= 2;
    ++halvings;
  }
  const long bits = bits_for_digits(precision) + halvings + 16;
  PrecisionScope scope(bits);
  const Rational eps = two_pow(-bits);
  Enclosure term(1);
  Enclosure sum(1);
  for (unsigned long k = 1;; ++k) {
    term = term * Enclosure(y / Rational(k));
    sum += term;
    if (term.hi() < eps) {
      // y <= 1/2: the remaining terms add at most term * y/(k+1) * 2 <= term.
      sum = Enclosure(sum.lo(), sum.hi() + term.hi());
      break;
    }
  }
  for (long i = 0; i < halvings; ++i) sum = sqr(sum);
  return sum;
}

}  // namespace

Enclosure exp_enclosure(const Rational& x, int precision) {
  if (sgn(x) >= 0) return exp_nonnegative(x, precision);
  Enclosure e = exp_nonnegative(-x, precision);
  PrecisionScope scope(bits_for_digits(precision) + 16);
  return Enclosure(1) / e;
}

Enclosure exp_enclosure(const Enclosure& x, int precision) {
  if (x.is_point()) return exp_enclosure(x.lo(), precision);
  return Enclosure(exp_enclosure(x.lo(), precision).lo(), exp_enclosure(x.hi(), precision).hi());
}

namespace {

// atanh(z) for 0 <= z <= 1/3.
Enclosure atanh_small(const Rational& z, long bits) {
  PrecisionScope scope(bits);
  const Rational eps = two_pow(-bits);
  Enclosure z2 = Enclosure(z) * Enclosure(z);
  Enclosure power(z);
  Enclosure sum(0);
  for (unsigned long j = 0;; ++j) {
    sum += power / Enclosure(Rational(2 * j + 1));
    power = power * z2;
    if (power.hi() < eps) {
      // the rest is below power / (1 - z^2) <= 9/8 power
      return Enclosure(sum.lo(), sum.hi() + power.hi() * 2);
    }
  }
}

}  // namespace

Enclosure log_enclosure(const Rational& x, int precision) {
  if (sgn(x) <= 0) throw std::domain_error("log of a nonpositive number");
  if (x == 1) return Enclosure(0);
  const long k = floor_log2(x);
  const Rational m = x * two_pow(-k);
  const long bits = bits_for_digits(precision) + 16 + bit_length(Integer(k < 0 ? -k : k));
  Rational z = (m - 1) / (m + 1);
  Enclosure result = atanh_small(z, bits) * Enclosure(2);
  if (k != 0) {
    Enclosure ln2 = atanh_small(ratio(1, 3), bits) * Enclosure(2);
    PrecisionScope scope(bits);
    result = result + ln2 * Enclosure(Rational(k));
  }
  return result;
}

// ---------------------------------------------------------------- Bessel

Polynomial bessel_partial_polynomial(unsigned k, unsigned terms) {
  std::vector<Rational> c(terms);
  for (unsigned n = 0; n < terms; ++n) {
    Rational v(Integer(1), factorial(n) * factorial(n + k));
    v.canonicalize();
    c[n] = v;
  }
  return Polynomial(std::move(c));
}

Enclosure bessel_ratio(unsigned k, const Rational& u, int precision) {
  if (sgn(u) < 0) throw std::domain_error("bessel_ratio: negative argument");
  Rational first(Integer(1), factorial(k));
  first.canonicalize();
  if (sgn(u) == 0) return Enclosure(first);
  const long bits = bits_for_digits(precision) + 16;
  PrecisionScope scope(bits);
  const Rational eps = two_pow(-bits);
  const Rational half = ratio(1, 2);
  Enclosure term(first);
  Enclosure sum(first);
  for (std::size_t n = 0; n < term_cap(); ++n) {
    Rational r = u / Rational((n + 1) * (n + k + 1));
    term = term * Enclosure(r);
    // Later ratios are smaller than r, so the rest is below 2 * term once r <= 1/2.
    if (r <= half && term.hi() <= sum.lo() * eps) return Enclosure(sum.lo(), sum.hi() + term.hi() * 2);
    sum += term;
  }
  throw std::runtime_error("bessel_ratio: term cap reached");
}

Enclosure bessel_ratio(unsigned k, const Enclosure& u, int precision) {
  if (u.is_point()) return bessel_ratio(k, u.lo(), precision);
  if (sgn(u.lo()) < 0) throw std::domain_error("bessel_ratio: negative argument");
  return Enclosure(bessel_ratio(k, u.lo(), precision).lo(), bessel_ratio(k, u.hi(), precision).hi());
}

// ---------------------------------------------------------------- 1F2

Enclosure hyp1f2(const Rational& b1, const Rational& b2, const Rational& x, int precision) {
  for (const Rational* b : {&b1, &b2})
    if (b->get_den() == 1 && sgn(*b) <= 0) throw std::domain_error("hyp1f2: parameter is a nonpositive integer");
  if (sgn(x) < 0) throw std::domain_error("hyp1f2: negative argument");
  if (sgn(x) == 0) return Enclosure(1);
  const long bits = bits_for_digits(precision) + 16;
  PrecisionScope scope(bits);
  const Rational eps = two_pow(-bits);
  const Rational half = ratio(1, 2);
  Enclosure term(1);
  Enclosure sum(1);
  for (std::size_t n = 0; n < term_cap(); ++n) {
    term = term * Enclosure(x / ((b1 + n) * (b2 + n)));
    const Rational c1 = b1 + (n + 1), c2 = b2 + (n + 1);
    const bool settled = sgn(c1) > 0 && sgn(c2) > 0 && x / (c1 * c2) <= half;
    Rational mag = std::max(Rational(-term.lo()), term.hi());
    Rational scale = std::max(Rational(1), std::max(Rational(-sum.lo()), sum.hi()));
    if (settled && mag <= scale * eps) return widen(sum, mag * 2);
    sum += term;
  }
  throw std::runtime_error("hyp1f2: term cap reached");
}

// ---------------------------------------------------------------- polygamma

namespace {

// (-1)^{n+1}
int polygamma_sign(unsigned n) { return n % 2 == 1 ? 1 : -1; }

// sum_{j<count} (x+j)^{-(n+1)}
Enclosure shifted_power_sum(unsigned n, const Rational& x, std::size_t count) {
  Enclosure sum(0);
  for (std::size_t j = 0; j < count; ++j) sum += Enclosure(1) / pow(Enclosure(x + j), n + 1);
  return sum;
}

// Asymptotic series of (-1)^{n+1} psi^(n)(z); empty optional if the terms
// start growing before reaching the target.
bool asymptotic_part(unsigned n, const Rational& z, const Rational& target, Enclosure& out) {
  Enclosure zi = Enclosure(1) / Enclosure(z);
  Enclosure zi2 = zi * zi;
  Enclosure zp = pow(zi, n);
  Enclosure sum = Enclosure(Rational(factorial(n - 1))) * zp + Enclosure(Rational(factorial(n)) / 2) * zp * zi;
  Rational previous = -1;
  for (unsigned k = 1; k < 2000; ++k) {
    zp = zp * zi2;
    Rational coef = bernoulli(2 * k) * Rational(factorial(2 * k + n - 1)) / Rational(factorial(2 * k));
    Enclosure a = Enclosure(coef) * zp;
    Rational mag = std::max(Rational(-a.lo()), a.hi());
    if (mag < target) {
      out = widen(sum, mag);
      return true;
    }
    if (sgn(previous) > 0 && mag > previous) return false;
    sum += a;
    previous = mag;
  }
  return false;
}

}  // namespace

Enclosure polygamma(unsigned n, const Rational& x, int precision, PolygammaMethod method, long threshold) {
  if (n < 1) throw std::domain_error("polygamma: order must be positive");
  if (sgn(x) <= 0) throw std::domain_error("polygamma: argument must be positive");
  const int s = polygamma_sign(n);
  const Rational nf(factorial(n));

  if (method == PolygammaMethod::hurwitz) {
    const long bits = bits_for_digits(precision) + 16;
    PrecisionScope scope(bits);
    double want = std::ceil(std::pow(10.0, (precision + 1.0) / (n + 1.0)));
    std::size_t count = static_cast<std::size_t>(std::clamp(want, 10.0, static_cast<double>(term_cap())));
    Enclosure sum = shifted_power_sum(n, x, count);
    Rational tail_lo = Rational(1) / (Rational(n) * pow(Rational(x + count), static_cast<long>(n)));
    Rational tail_hi = Rational(1) / (Rational(n) * pow(Rational(x + (count - 1)), static_cast<long>(n)));
    Enclosure value = (sum + Enclosure(tail_lo, tail_hi)) * Enclosure(nf);
    return s > 0 ? value : -value;
  }

  long lift = threshold > 0 ? threshold : std::max<long>(20, (4L * precision) / 10 + n + 5);
  const long bits = bits_for_digits(precision + 5) + 16;
  PrecisionScope scope(bits);
  const Rational target = ten_pow(-(precision + 3));
  for (int attempt = 0; attempt < 8; ++attempt, lift *= 2) {
    std::size_t count = 0;
    if (x < lift) {
      Rational gap = Rational(lift) - x;
      mpz_class c;
      mpz_cdiv_q(c.get_mpz_t(), gap.get_num().get_mpz_t(), gap.get_den().get_mpz_t());
      count = c.get_ui();
    }
    Enclosure tail;
    if (!asymptotic_part(n, x + count, target, tail)) continue;
    Enclosure value = shifted_power_sum(n, x, count) * Enclosure(nf) + tail;
    return s > 0 ? value : -value;
  }
  throw std::runtime_error("polygamma: asymptotic series did not reach the target");
}

Enclosure polygamma(unsigned n, const Enclosure& x, int precision) {
  if (x.is_point()) return polygamma(n, x.lo(), precision);
  Enclosure at_lo = polygamma(n, x.lo(), precision);
  Enclosure at_hi = polygamma(n, x.hi(), precision);
  // (-1)^{n+1} psi^(n) is positive and decreasing.
  if (polygamma_sign(n) > 0) return Enclosure(at_hi.lo(), at_lo.hi());
  return Enclosure(at_lo.lo(), at_hi.hi());
}

// ---------------------------------------------------------------- K_l

Polynomial k_tail_numerator(unsigned l) {
  // K_0 = q/(1-q); each q d/dq step raises the pole order by one.
  Polynomial num = Polynomial::identity();
  const Polynomial q = Polynomial::identity();
  const Polynomial one_minus_q{Rational(1), Rational(-1)};
  for (unsigned m = 1; m <= l; ++m) num = q * num.derivative() * one_minus_q + q * num * Rational(m);
  return num;
}

Enclosure k_tail(unsigned l, const Rational& a, int precision) { return k_tail(l, Enclosure(a), precision); }

Enclosure k_tail(unsigned l, const Enclosure& a, int precision) {
  if (sgn(a.lo()) <= 0) throw std::domain_error("k_tail: a must be positive");
  const double al = to_double(a.lo());
  const double loss = al > 0 ? std::max(0.0, -std::log10(-std::expm1(-al))) : 0.0;
  const int guard = static_cast<int>((l + 1) * loss) + 5;
  const Enclosure q = exp_enclosure(-a, precision + guard);
  const Polynomial num = k_tail_numerator(l);
  PrecisionScope scope(bits_for_digits(precision + guard) + 16);
  auto at = [&](const Rational& qv) {
    return evaluate(num, Enclosure(qv)) / pow(Enclosure(Rational(1) - qv), l + 1);
  };
  // Nonnegative coefficients: K_l increases with q.
  return Enclosure(at(q.lo()).lo(), at(q.hi()).hi());
}

// ---------------------------------------------------------------- V_n

namespace {

/// sum_{k>N} k^{-s} by Euler-Maclaurin through the B_4 term. For x^{-s} all odd
/// derivatives are negative, so the remainder after the B_2 term lies between 0
/// and the B_4 term.
std::pair<Rational, Rational> zeta_tail(long s, const Rational& N) {
  const Rational base = Rational(1) / (Rational(s - 1) * pow(N, s - 1)) - Rational(1) / (2 * pow(N, s)) +
                        Rational(s) / (12 * pow(N, s + 1));
  const Rational b4 = Rational(s * (s + 1) * (s + 2)) / (720 * pow(N, s + 3));
  return {base - b4, base};
}

}  // namespace

Enclosure vn_remainder(unsigned n, const Rational& u, int precision) {
  if (n < 1) throw std::domain_error("vn_remainder: n must be positive");
  if (sgn(u) < 0) throw std::domain_error("vn_remainder: u must be nonnegative");
  const long bits = bits_for_digits(precision + 5) + 16;
  PrecisionScope scope(bits);
  // Tail: term_k = (2/c^s) k^{-s} / (1 + a/k^2), s = 2n+2, a = (u/c)^2, and
  // k^{-s} - a k^{-s-2} <= k^{-s}/(1 + a/k^2) <= k^{-s} - a k^{-s-2} + a^2 k^{-s-4};
  // the bracket width is O(a^2 N^{-s-3} + s^3 N^{-s-3}).
  const long s = 2 * n + 2;
  const double ad = to_double(u) * to_double(u) / 39.47;
  const double scale = std::max({1.0, ad * ad, s * s * s / 720.0});
  const double pref_d = 2.0 / std::pow(6.2831853, static_cast<double>(s));
  double want = std::ceil(std::pow(4.0 * pref_d * scale * std::pow(10.0, precision + 1.0), 1.0 / (s + 3.0)));
  const unsigned long N = static_cast<unsigned long>(std::clamp(want, 16.0, static_cast<double>(term_cap())));

  const Enclosure c = pi_enclosure() * Enclosure(2);
  const Enclosure c2 = c * c;
  const Enclosure c2n = pow(c, 2 * n);
  const Rational u2 = u * u;
  Enclosure sum(0);
  for (unsigned long k = 1; k <= N; ++k) {
    Rational kk = Rational(k) * k;
    Enclosure den = (Enclosure(u2) + c2 * Enclosure(kk)) * c2n * Enclosure(pow(kk, static_cast<long>(n)));
    sum += Enclosure(2) / den;
  }
  const Rational Nq(N);
  const auto z0 = zeta_tail(s, Nq), z1 = zeta_tail(s + 2, Nq), z2 = zeta_tail(s + 4, Nq);
  const Enclosure a = Enclosure(u2) / c2;
  const Enclosure pref = Enclosure(2) / pow(c, static_cast<unsigned>(s));
  Rational tail_lo = (pref * (Enclosure(z0.first) - a * Enclosure(z1.second))).lo();
  if (sgn(tail_lo) < 0) tail_lo = 0;
  const Rational tail_hi = (pref * (Enclosure(z0.second) - a * Enclosure(z1.first) + a * a * Enclosure(z2.second))).hi();
  return sum + Enclosure(tail_lo, std::max(tail_lo, tail_hi));
}

// ---------------------------------------------------------------- truncated exp

ExpTaylorGaps exp_taylor_bound(unsigned n, const Rational& b, const Rational& x, int precision) {
  if (sgn(b) <= 0) throw std::domain_error("exp_taylor_bound: b must be positive");
  if (sgn(x) < 0 || x > b) throw std::domain_error("exp_taylor_bound: x outside [0, b]");
  // e^x - S_n(x) - a_n(b) x^{n+1} = -x^{n+1} (b-x) T(x),
  // T = sum_{j>=1} h_j / (n+1+j)!,  h_j = (b^j - x^j)/(b - x) = sum_{i<j} b^{j-1-i} x^i.
  const Rational factor = pow(x, static_cast<long>(n + 1)) * (b - x);
  const long bits = bits_for_digits(precision) + 16;
  PrecisionScope scope(bits);
  const Rational eps = two_pow(-bits);
  Rational T = 0;
  Rational h = 1;       // h_1
  Rational xj = x;      // x^1
  Rational bpow = 1;    // b^{j-1}
  Rational tail = 0;
  for (unsigned long j = 1; j < 100000; ++j) {
    Rational fj(factorial(n + 1 + j));
    T += h / fj;
    h = b * h + xj;
    xj *= x;
    bpow *= b;
    // h_i <= i b^{i-1}; once the ratio of the majorant drops below 1/2, the rest is below twice its next term.
    Rational next = Rational(j + 1) * bpow / Rational(factorial(n + 2 + j));
    Rational majorant_ratio = b * Rational(j + 2) / (Rational(j + 1) * Rational(n + 3 + j));
    if (majorant_ratio <= ratio(1, 2) && next < eps) {
      tail = next * 2;
      break;
    }
  }
  Enclosure Tenc(T, T + tail);
  // R = ((n+1)! a_n(b) - e^b) / ((n+1)! (n+1) b)
  Enclosure eb = exp_enclosure(b, precision + 5);
  Rational Sb = 0, term = 1;
  for (unsigned k = 0; k <= n; ++k) {
    Sb += term;
    term = term * b / Rational(k + 1);
  }
  const Rational nf1(factorial(n + 1));
  Enclosure alpha = (eb - Enclosure(Sb)) / Enclosure(pow(b, static_cast<long>(n + 1)));
  Enclosure R = (alpha * Enclosure(nf1) - eb) / Enclosure(nf1 * (n + 1) * b);
  ExpTaylorGaps gaps;
  gaps.upper = Enclosure(factor) * Tenc;
  gaps.lower = Enclosure(factor) * (-Tenc - R);
  if (sgn(factor) == 0) gaps.upper = gaps.lower = Enclosure(0);
  return gaps;
}

}  // namespace besselcm
