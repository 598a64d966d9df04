#include "besselcm/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace besselcm {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer: " + std::string(s));
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in " + std::string(text));
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  long exponent = 0;
  std::string_view mantissa = text;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    Integer ex = parse_integer(text.substr(e + 1));
    if (!ex.fits_slong_p()) throw std::invalid_argument("exponent out of range");
    exponent = ex.get_si();
    mantissa = text.substr(0, e);
  }

  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = mantissa.substr(0, dot);
    std::string_view frac_part = mantissa.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty()))
      throw std::invalid_argument("malformed decimal: " + std::string(text));
    digits = std::string(int_part) + std::string(frac_part);
    frac_digits = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(mantissa)) throw std::invalid_argument("malformed number: " + std::string(text));
    digits = std::string(mantissa);
  }
  Rational q(Integer(digits, 10));
  long shift = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift >= 0)
    q *= ten_pow;
  else
    q /= ten_pow;
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_decimal(const Rational& x, int digits) {
  if (digits < 0) digits = 0;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Integer num = abs(x.get_num()) * scale;
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
  std::string s = q.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits + 1 - s.size()), '0');
  if (digits > 0) s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  if (sgn(x) < 0) s.insert(0, "-");
  return s;
}

double to_double(const Rational& x) { return x.get_d(); }

Integer factorial(unsigned long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer b;
  if (k > n) return 0;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

Integer pow(const Integer& x, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), exponent);
  return r;
}

Rational pow(const Rational& x, long exponent) {
  unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  Rational r(pow(x.get_num(), e), pow(x.get_den(), e));
  if (exponent < 0) {
    if (sgn(x) == 0) throw std::domain_error("zero to a negative power");
    r = 1 / r;
  }
  r.canonicalize();
  return r;
}

int sign(const Rational& x) { return sgn(x); }

long bit_length(const Integer& x) {
  if (x == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

long floor_log2(const Rational& x) {
  if (sgn(x) == 0) throw std::domain_error("log2 of zero");
  long e = bit_length(x.get_num()) - bit_length(x.get_den());
  // 2^(e-1) < |x| < 2^(e+1); pin it down exactly.
  Rational ax = abs(x);
  Rational p = pow(Rational(2), e);
  while (p > ax) {
    --e;
    p /= 2;
  }
  while (p * 2 <= ax) {
    ++e;
    p *= 2;
  }
  return e;
}

namespace {

Rational round_dir(const Rational& x, long bits, bool up) {
  if (bits <= 0 || sgn(x) == 0) return x;
  long nb = bit_length(x.get_num());
  long db = bit_length(x.get_den());
  if (nb + db <= 2 * bits + 8) return x;
  // Scale so the integer part carries `bits` significant bits.
  long shift = bits - (nb - db);
  Integer scaled_num = x.get_num();
  Integer scaled_den = x.get_den();
  if (shift >= 0)
    mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), static_cast<unsigned long>(shift));
  else
    mpz_mul_2exp(scaled_den.get_mpz_t(), scaled_den.get_mpz_t(), static_cast<unsigned long>(-shift));
  Integer q;
  if (up)
    mpz_cdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  else
    mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  Rational r(q);
  if (shift >= 0)
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(shift));
  else
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-shift));
  return r;
}

}  // namespace

Rational round_down(const Rational& x, long bits) { return round_dir(x, bits, false); }
Rational round_up(const Rational& x, long bits) { return round_dir(x, bits, true); }

Rational rational_from_double(double value, int sig) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  if (value == 0.0) return 0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", sig - 1, value);
  return parse_rational(buf);
}

}  // namespace besselcm
