#include <doctest.h>

#include "besselcm/expring.hpp"
#include "besselcm/grid.hpp"
#include "besselcm/seriesratio.hpp"

using namespace besselcm;

namespace {

Rational q(const char* s) { return parse_rational(s); }

ExpPoly E(unsigned f, std::initializer_list<Rational> c) { return ExpPoly::term(f, Polynomial(c)); }

std::vector<Rational> series(const ExpPoly& p, unsigned N) { return series_at_zero(ExpPolyQuotient(p), N); }

Rational inv_fact2(unsigned a, unsigned b) {
  Rational r(1, factorial(a) * factorial(b));
  r.canonicalize();
  return r;
}

}  // namespace

TEST_SUITE("seriesratio") {
  TEST_CASE("c_k spot values") {
    CHECK(c_coeff(0, 1) == 1);
    CHECK(c_coeff(1, 1) == 1);
    CHECK(c_coeff(2, 1) == q("23/22"));
    for (const char* bs : {"1/3", "2", "7/5"}) {
      const Rational b = q(bs);
      CHECK(c_coeff(1, b) == (3 + b) / 4);
      CHECK(c_coeff(2, b) == (14 + 8 * b + b * b) / 22);
    }
  }

  TEST_CASE("c_k monotonicity") {
    const auto one = c_ratio_sequence(1, 200);
    REQUIRE(one.values.size() == 201);
    CHECK(one.increasing);
    CHECK(one.values[0] == one.values[1]);  // tie at k = 0 when beta = 1
    for (unsigned k = 1; k < 200; ++k) CHECK(one.values[k + 1] > one.values[k]);
    CHECK(c_ratio_sequence(2, 60).strict);
    const auto half = c_ratio_sequence(q("1/2"), 10);
    CHECK(!half.increasing);
    CHECK(half.values[1] == q("7/8"));
  }

  TEST_CASE("C_k spot values and monotonicity") {
    for (const char* bs : {"1/2", "1/3", "3/4"}) {
      const Rational b = q(bs);
      CHECK(C_coeff(0)(b) == (b - 1) / 3);
      CHECK(C_coeff(1)(b) == (b * b + 4 * b - 4) / 20);
    }
    CHECK(C_coeff(1)(q("1/2")) - C_coeff(0)(q("1/2")) == q("19/240"));
    const auto s = C_ratio_sequence(q("1/2"), 100);
    CHECK(s.strict);
    CHECK(C_ratio_sequence(q("1/5"), 60).strict);
  }

  TEST_CASE("xi and lambda against direct series products") {
    const ExpPoly em1 = E(1, {1}) - E(0, {1});
    const ExpPoly em1u = E(1, {1}) + E(0, {-1, -1});
    const auto A = series(em1 * em1 * em1u, 14);                          // (e^u-1)^2 (e^u-1-u)
    const auto B = series((E(1, {-2, 1}) + E(0, {2, 1})) * em1, 14);     // [e^u(u-2)+u+2](e^u-1)
    const auto S = series(em1u * em1u * E(1, {1}), 14);                  // (e^u-1-u)^2 e^u
    for (const char* bs : {"1/2", "1", "5/3"}) {
      const Rational beta = q(bs);
      for (unsigned k = 0; k <= 8; ++k) {
        Rational r = 0;
        for (unsigned i = 0; i <= k + 4; ++i) {
          const unsigned j = k + 4 - i;
          r += A[i] * pow(beta, static_cast<long>(j + 1)) * inv_fact2(j, j + 3);
          r -= B[i] * pow(beta, static_cast<long>(j)) * inv_fact2(j, j + 2);
        }
        CAPTURE(bs);
        CAPTURE(k);
        CHECK(xi_coeff(k)(beta) == r);
        CHECK(lambda_coeff(k) == S[k + 4]);
        CHECK(C_coeff(k)(beta) == r / S[k + 4]);
      }
    }
  }

  TEST_CASE("ladder") {
    CHECK(ladder_U(4) == 4074);
    CHECK(ladder_M(0, 4) == 2318400);
    for (unsigned k = 0; k <= 50; ++k)
      for (unsigned l = 0; l <= k; ++l) CHECK(ladder_W(k, k - l) == ladder_V(k, l));
    const auto r = ladder_check(50);
    CHECK(r.ok());
    REQUIRE(r.C_values.size() == 6);
    CHECK(r.C_values[0] == 181440);
    CHECK(r.C_values[5] == Integer("939390217920"));
    for (unsigned m = 0; m <= 50; ++m) {
      CHECK(sgn(ladder_A(m)) > 0);
      CHECK(sgn(ladder_B(m)) < 0);
      CHECK(sgn(ladder_C(m)) > 0);
    }
  }

  TEST_CASE("truncated series ratio increasing on (0, 3)") {
    const unsigned K = 40;
    Rational prev = -1;
    for (unsigned i = 1; i < 30; ++i) {
      const Rational u(i, 10);
      Rational num = 0, den = 0, un = 1;
      for (unsigned k = 0; k <= K; ++k, un *= u) {
        num += q_coeff(k)(Rational(1)) * un;
        den += p_coeff(k) * un;
      }
      const Rational ratio = num / den;
      CHECK(ratio >= prev);
      prev = ratio;
    }
  }

  TEST_CASE("unimodal maximum of a parabola") {
    const EnclosureFunction f = [](const Enclosure& u, int) { return u * (Enclosure(1) - u); };
    const auto r = unimodal_max(f, 0, 1, q("1/1000"));
    CHECK(r.converged);
    CHECK(r.argmax.contains(q("1/2")));
    CHECK(r.argmax.width() <= q("1/1000"));
    CHECK(r.max.contains(q("1/4")));
    CHECK_THROWS(unimodal_max(f, 1, 0, q("1/1000")));
  }

  TEST_CASE("F and G limits and shapes") {
    CHECK(abs(f_beta(Enclosure(q("1e-6")), q("1/2"), 30) - Enclosure(1)).hi() < q("1e-4"));
    CHECK(f_beta(Enclosure(100), 1, 30).hi() < q("1e-3"));
    CHECK(abs(g_beta(Enclosure(q("1e-6")), 1, 30) - Enclosure(1)).hi() < q("1e-3"));
    const auto g1 = [](int u) { return g_beta(Enclosure(u), 1, 30); };
    CHECK(g1(2).less_than(g1(1)));
    CHECK(g1(4).less_than(g1(2)));

    const auto grid = make_grid(parse_grid("geometric:0.01,100,60"));
    const auto half = scan_slopes([](const Enclosure& u, int p) { return g_beta(u, q("1/2"), p); }, grid);
    CHECK(half.definite);
    CHECK(half.sign_changes == 1);
    const auto one = scan_slopes([](const Enclosure& u, int p) { return g_beta(u, 1, p); }, grid);
    for (int s : one.signs) CHECK(s <= 0);

    const auto m = unimodal_max([](const Enclosure& u, int p) { return f_beta(u, q("1/2"), p); }, q("1/100"), 60,
                                q("1/1000"));
    CHECK(m.max.lo() > 1);
  }

  TEST_CASE("H_{k,beta} spot checks") {
    CHECK(h_k_beta(5, Enclosure(1), 1, 30).hi() <= 1);
    CHECK(abs(h_k_beta(3, Enclosure(q("1e-8")), 1, 30) - Enclosure(1)).hi() < q("1e-6"));
    CHECK_THROWS(h_k_beta(3, Enclosure(-1), 1, 30));
  }

  TEST_CASE("parallel scans match serial scans") {
    const auto grid = make_grid(parse_grid("geometric:0.05,20,24"));
    const EnclosureFunction f = [](const Enclosure& u, int p) { return f_beta(u, q("1/2"), p); };
    const auto a = scan_slopes(f, grid, 30, 120, 1);
    const auto b = scan_slopes(f, grid, 30, 120, 4);
    CHECK(a.signs == b.signs);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a.values[i] == b.values[i]);
  }
}
