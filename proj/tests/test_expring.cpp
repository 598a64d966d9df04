#include <doctest.h>

#include "besselcm/exactpoly.hpp"
#include "besselcm/expring.hpp"
#include "besselcm/specfun.hpp"

using namespace besselcm;

namespace {

Rational q(const char* s) { return parse_rational(s); }

ExpPoly E(unsigned f, std::initializer_list<Rational> c) { return ExpPoly::term(f, Polynomial(c)); }

}  // namespace

TEST_SUITE("expring") {
  TEST_CASE("kernel series is the Bernoulli generating function") {
    // u/(1 - e^-u) = sum (-1)^n B_n u^n / n!
    const auto s = series_at_zero(kernel_derivative(0), 8);
    REQUIRE(s.size() >= 7);
    CHECK(s[0] == 1);
    CHECK(s[1] == q("1/2"));
    CHECK(s[2] == q("1/12"));
    CHECK(s[3] == 0);
    CHECK(s[4] == q("-1/720"));
    CHECK(s[5] == 0);
    CHECK(s[6] == q("1/30240"));
  }

  TEST_CASE("differentiation is a derivation") {
    const ExpPolyQuotient f = kernel_derivative(0);
    const ExpPolyQuotient g = kernel_derivative(2);
    CHECK(differentiate(f * g) == differentiate(f) * g + f * differentiate(g));
    CHECK(differentiate(f) == kernel_derivative(1));
    CHECK(differentiate(differentiate(differentiate(f))) == kernel_derivative(3));
  }

  TEST_CASE("series of the derivative is the derivative of the series") {
    for (unsigned k = 0; k <= 4; ++k) {
      const auto f = kernel_derivative(k);
      const auto s = series_at_zero(f, 13);
      const auto d = series_at_zero(differentiate(f), 12);
      for (std::size_t n = 0; n + 1 < s.size() && n < d.size(); ++n) CHECK(d[n] == s[n + 1] * Rational(n + 1));
    }
  }

  TEST_CASE("product evaluates inside the product of enclosures") {
    const auto f = kernel_derivative(1), g = kernel_derivative(3);
    for (const char* us : {"1/3", "2", "9"}) {
      const Rational u = q(us);
      const Enclosure fg = eval_enclosure(f * g, u, 30);
      const Enclosure prod = eval_enclosure(f, u, 30) * eval_enclosure(g, u, 30);
      CHECK(widen(prod, q("1e-25")).contains(fg));
    }
  }

  TEST_CASE("evaluation matches finite differences") {
    const Rational h = q("1/100000");
    for (unsigned k = 1; k <= 4; ++k)
      for (int u : {1, 2, 5}) {
        const Enclosure fd = (eval_enclosure(kernel_derivative(k - 1), Rational(u) + h, 40) -
                              eval_enclosure(kernel_derivative(k - 1), Rational(u) - h, 40)) /
                             Enclosure(2 * h);
        CAPTURE(k);
        CAPTURE(u);
        CHECK(abs(fd - eval_enclosure(kernel_derivative(k), Rational(u), 40)).hi() < q("1e-8"));
      }
  }

  TEST_CASE("series and closed form overlap near the switchover") {
    const ExpPolyEvaluator& ev = kernel_evaluator(3);
    for (const char* us : {"1/5", "1/8", "6/25"}) {
      const Enclosure u(q(us));
      CHECK(ev.direct(u, 30).overlaps(ev.near_zero(u, 30)));
    }
  }

  TEST_CASE("kernel fourth derivative below the ray bound") {
    const Enclosure K4 = k_tail(4, Rational(7), 30), K3 = k_tail(3, Rational(7), 30);
    // kernel^(4)(u) = u K_4(u) - 4 K_3(u): equality at u = 7, decreasing beyond
    const Enclosure at7 = eval_enclosure(kernel_derivative(4), Rational(7), 30);
    CHECK(at7.overlaps(Enclosure(7) * K4 - Enclosure(4) * K3));
    for (const char* us : {"71/10", "10", "20", "50"}) {
      const Rational u = q(us);
      const Enclosure lhs = eval_enclosure(kernel_derivative(4), u, 30);
      const Enclosure rhs = Enclosure(u) * K4 - Enclosure(4) * K3;
      CHECK(lhs.hi() <= rhs.lo());
    }
  }

  TEST_CASE("quotients canonicalize exact divisions") {
    const ExpPoly em1 = E(1, {1}) - E(0, {1});
    const ExpPolyQuotient a(em1 * em1, 1);
    CHECK(a.pole_order() == 0);
    CHECK(a == ExpPolyQuotient(em1));
    CHECK(em1.at_zero() == 0);
  }

  TEST_CASE("F chain zeros and the F4 build") {
    const FChain chain = build_F_chain();
    CHECK(chain.zeros.size() == 7);
    for (const auto& [name, value] : chain.zeros) {
      CAPTURE(name);
      CHECK(value == 0);
    }
    const F4Build b = build_F4_via_pade();
    CHECK(b.F4.degree() == 28);
    CHECK(b.F4.coefficient(0) == q("4038947756777593110528000000"));
    CHECK(!first_difference(b.F4, read_polynomial(std::string(BESSELCM_DATA_DIR) + "/f4.coeffs")));
  }
}
