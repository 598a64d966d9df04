#include "besselcm/enclosure.hpp"

#include <cmath>

#include <algorithm>
#include <stdexcept>

namespace besselcm {

namespace {
thread_local long tls_bits = 0;
}

long working_bits() { return tls_bits; }

long bits_for_digits(int digits) { return static_cast<long>(digits) * 3322L / 1000L + 40; }

PrecisionScope::PrecisionScope(long bits) : saved_(tls_bits) { tls_bits = bits; }

PrecisionScope::~PrecisionScope() { tls_bits = saved_; }

Enclosure::Enclosure(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw std::invalid_argument("enclosure with lo > hi");
}

Enclosure Enclosure::outward(const Rational& lo, const Rational& hi) {
  const long bits = tls_bits;
  return Enclosure(round_down(lo, bits), round_up(hi, bits));
}

Enclosure& Enclosure::operator+=(const Enclosure& b) {
  *this = outward(lo_ + b.lo_, hi_ + b.hi_);
  return *this;
}

Enclosure& Enclosure::operator-=(const Enclosure& b) {
  *this = outward(lo_ - b.hi_, hi_ - b.lo_);
  return *this;
}

Enclosure& Enclosure::operator*=(const Enclosure& b) {
  if (is_point() && b.is_point()) {
    Rational p = lo_ * b.lo_;
    *this = outward(p, p);
    return *this;
  }
  if (sgn(lo_) >= 0 && sgn(b.lo_) >= 0) {
    *this = outward(lo_ * b.lo_, hi_ * b.hi_);
    return *this;
  }
  Rational p1 = lo_ * b.lo_, p2 = lo_ * b.hi_, p3 = hi_ * b.lo_, p4 = hi_ * b.hi_;
  *this = outward(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
  return *this;
}

Enclosure& Enclosure::operator/=(const Enclosure& b) {
  if (b.contains_zero()) throw std::domain_error("enclosure division by an interval containing zero");
  Rational q1 = lo_ / b.lo_, q2 = lo_ / b.hi_, q3 = hi_ / b.lo_, q4 = hi_ / b.hi_;
  *this = outward(std::min({q1, q2, q3, q4}), std::max({q1, q2, q3, q4}));
  return *this;
}

namespace {

Rational decimal_round(const Rational& x, int digits, bool up) {
  Integer scale = pow(Integer(10), static_cast<unsigned long>(digits));
  Integer num = x.get_num() * scale;
  Integer q;
  if (up)
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
  else
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
  Rational r(q, scale);
  r.canonicalize();
  return r;
}

}  // namespace

std::string Enclosure::str(int digits) const {
  if (digits < 0) return "[" + to_string(lo_) + ", " + to_string(hi_) + "]";
  return "[" + to_decimal(decimal_round(lo_, digits, false), digits) + ", " +
         to_decimal(decimal_round(hi_, digits, true), digits) + "]";
}

std::string decimal_bound(const Rational& x, int significant, bool up) {
  if (sgn(x) == 0) return "0";
  const Rational ax = abs(x);
  long e = static_cast<long>(std::floor(floor_log2(ax) * 0.30102999566398120));
  while (pow(Rational(10), e) > ax) --e;
  while (pow(Rational(10), e + 1) <= ax) ++e;
  long shift = e - significant + 1;
  const Rational scaled = x / pow(Rational(10), shift);
  Integer q;
  if (up)
    mpz_cdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  else
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  std::string digits = Integer(abs(q)).get_str();
  if (static_cast<int>(digits.size()) > significant) {  // rounded up to 10^significant
    digits.pop_back();
    ++e;
  }
  std::string out = sgn(q) < 0 ? "-" : "";
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  return out + "e" + std::to_string(e);
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  Rational lo = std::max(a.lo(), b.lo());
  Rational hi = std::min(a.hi(), b.hi());
  if (lo > hi) throw std::domain_error("disjoint enclosures");
  return Enclosure(lo, hi);
}

Enclosure abs(const Enclosure& x) {
  if (x.nonnegative()) return x;
  if (x.nonpositive()) return -x;
  return Enclosure(0, std::max(Rational(-x.lo()), x.hi()));
}

Enclosure sqr(const Enclosure& x) {
  Enclosure a = abs(x);
  return Enclosure::outward(a.lo() * a.lo(), a.hi() * a.hi());
}

Enclosure pow(const Enclosure& x, unsigned exponent) {
  if (exponent == 0) return Enclosure(1);
  if (exponent % 2 == 0) {
    Enclosure a = abs(x);
    return Enclosure::outward(besselcm::pow(a.lo(), static_cast<long>(exponent)), besselcm::pow(a.hi(), static_cast<long>(exponent)));
  }
  return Enclosure::outward(besselcm::pow(x.lo(), static_cast<long>(exponent)), besselcm::pow(x.hi(), static_cast<long>(exponent)));
}

Enclosure widen(const Enclosure& x, const Rational& radius) { return Enclosure(x.lo() - radius, x.hi() + radius); }

Enclosure evaluate(const Polynomial& p, const Enclosure& x) {
  if (x.is_point() && working_bits() == 0) return Enclosure(p(x.lo()));
  const auto& c = p.coefficients();
  Enclosure acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + Enclosure(*it);
  return acc;
}

}  // namespace besselcm
