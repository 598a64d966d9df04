#include <doctest.h>

#include "besselcm/specfun.hpp"

using namespace besselcm;

namespace {

Rational q(const char* s) { return parse_rational(s); }

// Reference digits, truncated.
const Rational kE = q("2.71828182845904523536028747135266249775724709369995");
const Rational kPi = q("3.14159265358979323846264338327950288419716939937510");

Rational tol(int digits) { return pow(Rational(10), -static_cast<long>(digits)); }

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(2) == q("1/6"));
    CHECK(bernoulli(12) == q("-691/2730"));
    CHECK(bernoulli(13) == 0);
    for (unsigned n = 2; n <= 40; ++n) {
      Rational s = 0;
      for (unsigned k = 0; k <= n; ++k) s += Rational(binomial(n + 1, k)) * bernoulli(k);
      CAPTURE(n);
      CHECK(s == 0);
    }
  }

  TEST_CASE("exp and pi against reference digits") {
    const Enclosure e = exp_enclosure(Rational(1), 40);
    CHECK(e.width() <= tol(40) * 3);
    CHECK(e.overlaps(Enclosure(kE - tol(49), kE + tol(49))));
    CHECK(pi_enclosure().overlaps(Enclosure(kPi - tol(49), kPi + tol(49))));
    const Enclosure l = log_enclosure(Rational(2), 40);
    CHECK(exp_enclosure(l, 40).contains(Rational(2)) == true);
  }

  TEST_CASE("higher precision nests inside lower precision") {
    for (int p : {20, 40}) {
      CHECK(exp_enclosure(q("7/3"), p).contains(exp_enclosure(q("7/3"), p + 10)));
      CHECK(bessel_ratio(3, q("5/2"), p).contains(bessel_ratio(3, q("5/2"), p + 10)));
      CHECK(polygamma(1, q("3/2"), p).contains(polygamma(1, q("3/2"), p + 10)));
      CHECK(k_tail(4, Rational(7), p).contains(k_tail(4, Rational(7), p + 10)));
      CHECK(bessel_ratio(2, Rational(1), p + 10).width() < bessel_ratio(2, Rational(1), p).width());
    }
  }

  TEST_CASE("i_k values at zero and derivative recursion") {
    for (unsigned k = 0; k <= 5; ++k) CHECK(bessel_ratio(k, Rational(0), 30).contains(Rational(1, factorial(k))));
    const Rational h = q("1/1000000");
    for (const char* us : {"1/2", "1", "5"}) {
      const Rational u = q(us);
      for (unsigned k = 0; k <= 4; ++k) {
        const Enclosure fd = (bessel_ratio(k, u + h, 40) - bessel_ratio(k, u - h, 40)) / Enclosure(2 * h);
        const Enclosure next = bessel_ratio(k + 1, u, 40);
        CAPTURE(us);
        CAPTURE(k);
        CHECK(abs(fd - next).hi() <= 10 * h * h);
      }
    }
  }

  TEST_CASE("trigamma recurrence and value at 1") {
    for (const char* xs : {"1/2", "1", "3"}) {
      const Rational x = q(xs);
      const Enclosure d = polygamma(1, x, 40) - polygamma(1, Rational(x + 1), 40);
      CHECK(d.contains(Rational(1 / (x * x))));
    }
    const Enclosure z2 = sqr(pi_enclosure()) / Enclosure(6);
    CHECK(polygamma(1, Rational(1), 40).overlaps(z2));
    CHECK(polygamma(1, Rational(1), 10, PolygammaMethod::hurwitz).overlaps(z2));
    // psi''(1) = -2 zeta(3)
    const Rational zeta3 = q("1.2020569031595942853997381615114499907649862923405");
    CHECK(polygamma(2, Rational(1), 40).overlaps(Enclosure(-2 * zeta3 - tol(45), -2 * zeta3 + tol(45))));
  }

  TEST_CASE("two lift thresholds agree") {
    for (unsigned n = 1; n <= 4; ++n) {
      const Enclosure a = polygamma(n, q("3/7"), 40, PolygammaMethod::asymptotic, 20);
      const Enclosure b = polygamma(n, q("3/7"), 40, PolygammaMethod::asymptotic, 45);
      CHECK(a.overlaps(b));
    }
  }

  TEST_CASE("exponential sums K_l") {
    CHECK(k_tail(4, Rational(7), 30).less_than(k_tail(4, Rational(6), 30)));
    CHECK(k_tail(4, Rational(6), 30).less_than(k_tail(4, Rational(5), 30)));
    CHECK(k_tail(4, Rational(7), 30).hi() < q("1/720"));
    // K_0(a) = 1/(e^a - 1)
    const Enclosure k0 = k_tail(0, Rational(2), 40);
    CHECK(k0.overlaps(Enclosure(1) / (exp_enclosure(Rational(2), 40) - Enclosure(1))));
    // K_1 at small a ~ 1/a^2 - 1/12
    const Enclosure k1 = k_tail(1, q("1/100"), 40);
    CHECK(k1.lo() > 9999);
    CHECK(k1.hi() < 10000);
  }

  TEST_CASE("V_1 at zero is 1/720") {
    // sum 2 / ((2 pi k)^4) = 2 zeta(4) / (2 pi)^4 = 1/720
    CHECK(vn_remainder(1, Rational(0), 30).contains(q("1/720")));
    CHECK(vn_remainder(1, Rational(1), 30).hi() < q("1/720"));
  }

  TEST_CASE("hypergeometric special values") {
    CHECK(hyp1f2(1, 2, 0, 30).contains(Rational(1)));
    // 1F2(1; 1, k+1; u) = 0F1(; k+1; u) = k! i_k(u)
    const Enclosure h = hyp1f2(1, 4, 2, 40);
    CHECK(h.overlaps(bessel_ratio(3, Rational(2), 40) * Enclosure(6)));
  }

  TEST_CASE("term cap is configurable") {
    const auto saved = term_cap();
    set_term_cap(3);
    CHECK(term_cap() == 16);
    set_term_cap(saved);
    CHECK(term_cap() == saved);
  }
}
