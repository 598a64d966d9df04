#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace besselcm {

using Integer = mpz_class;
/// Exact rational number. GMP keeps every value in lowest terms with a
/// positive denominator after each arithmetic operation.
using Rational = mpq_class;

/// Accepts "p/q", integers, decimals ("1.25") and scientific ("1e-6").
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& x);

/// Fixed-point rendering with `digits` fractional digits, truncated toward zero.
std::string to_decimal(const Rational& x, int digits);

double to_double(const Rational& x);

Integer factorial(unsigned long n);
Integer binomial(unsigned long n, unsigned long k);

Rational pow(const Rational& x, long exponent);
Integer pow(const Integer& x, unsigned long exponent);

int sign(const Rational& x);

/// Number of bits needed to write |x| (0 for x = 0).
long bit_length(const Integer& x);

/// Largest dyadic q <= x with about `bits` significant bits. bits <= 0 is a no-op.
/// Values whose numerator and denominator are already short are returned as is.
Rational round_down(const Rational& x, long bits);
Rational round_up(const Rational& x, long bits);

/// floor(log2 |x|) for x != 0.
long floor_log2(const Rational& x);

/// Smallest exact decimal fraction with `sig` significant digits near a double.
Rational rational_from_double(double value, int sig = 12);

}  // namespace besselcm
