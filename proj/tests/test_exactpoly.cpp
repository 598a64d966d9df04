#include <doctest.h>

#include <algorithm>
#include <random>

#include "besselcm/exactpoly.hpp"
#include "besselcm/expring.hpp"
#include "besselcm/specfun.hpp"

using namespace besselcm;

namespace {

Rational q(const char* s) { return parse_rational(s); }

Rational random_rational(std::mt19937& rng, long lo, long hi, long den_max = 12) {
  std::uniform_int_distribution<long> d(1, den_max);
  const long den = d(rng);
  std::uniform_int_distribution<long> n(lo * den, hi * den);
  Rational r(n(rng), den);
  r.canonicalize();
  return r;
}

Polynomial random_polynomial(std::mt19937& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<Rational> c(deg(rng) + 1);
  for (auto& x : c) x = random_rational(rng, -10, 10);
  if (sgn(c.back()) == 0) c.back() = 1;
  return Polynomial(c);
}

std::string fixture(const char* name) { return std::string(BESSELCM_FIXTURES) + "/" + name; }

}  // namespace

TEST_SUITE("exactpoly") {
  TEST_CASE("evaluation and shifts") {
    Polynomial p{1, -3, 0, 2};  // 2u^3 - 3u + 1
    CHECK(poly_eval(p, q("1/2")) == q("-1/4"));
    CHECK(taylor_shift(p, 1) == Polynomial{0, 3, 6, 2});
    CHECK(taylor_shift(Polynomial{}, 3).is_zero());
  }

  TEST_CASE("taylor shift round trip") {
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
      const Polynomial p = random_polynomial(rng, 12);
      const Rational a = random_rational(rng, -5, 5);
      CHECK(taylor_shift(taylor_shift(p, a), -a) == p);
      CHECK(taylor_shift(taylor_shift(p, 1), 1) == taylor_shift(p, 2));
    }
  }

  TEST_CASE("bounds sandwich the polynomial on [0,1]") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> num(0, 1000);
    for (int i = 0; i < 40; ++i) {
      const Polynomial p = random_polynomial(rng, 10);
      const auto b = cargo_shisha_bounds(p);
      REQUIRE(b.size() == p.coefficients().size());
      const auto [lo, hi] = std::minmax_element(b.begin(), b.end());
      CHECK(b.front() == p(0));
      CHECK(b.back() == p(1));
      for (int j = 0; j < 100; ++j) {
        const Rational x(num(rng), 1000);
        const Rational v = p(x);
        CHECK(*lo <= v);
        CHECK(v <= *hi);
      }
    }
  }

  TEST_CASE("sign changes bound the positive roots") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> count(1, 6);
    for (int i = 0; i < 30; ++i) {
      Polynomial p{1};
      int positive = 0;
      const int n = count(rng);
      for (int j = 0; j < n; ++j) {
        Rational r = random_rational(rng, -4, 4);
        if (sgn(r) == 0) r = 1;
        if (sgn(r) > 0) ++positive;
        p *= Polynomial{-r, 1};
      }
      const auto v = descartes_sign_changes(p);
      CHECK(v >= static_cast<std::size_t>(positive));
      CHECK((v - positive) % 2 == 0);
    }
  }

  TEST_CASE("certified implies positive at sampled points") {
    const Polynomial p = read_polynomial(fixture("quadratic.coeffs"));
    CHECK(p == Polynomial{1, -1, 1});
    const auto cert = certify_positive_on_interval(p, 0, 2, q("1/2"));
    REQUIRE(cert.verdict == Verdict::certified);
    CHECK(cert.pieces.size() >= 4);
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> num(0, 20000);
    for (int i = 0; i < 1000; ++i) CHECK(p(Rational(num(rng), 10000)) > 0);
  }

  TEST_CASE("negative polynomial is falsified with a witness") {
    const Polynomial p = read_polynomial(fixture("negative.coeffs"));
    const auto cert = certify_positive_on_interval(p, 0, 1, 1);
    REQUIRE(cert.verdict == Verdict::falsified);
    REQUIRE(cert.witness);
    CHECK(p(*cert.witness) <= 0);
    const auto j = to_json(cert);
    CHECK(j["verdict"] == "falsified");
    CHECK(j["interval"][1] == "1");
  }

  TEST_CASE("malformed coefficient file names the line") {
    try {
      read_polynomial(fixture("malformed.coeffs"));
      FAIL("expected an error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("malformed.coeffs:2") != std::string::npos);
    }
  }

  TEST_CASE("root isolation") {
    auto [a, b] = isolate_root(Polynomial{q("-1/2"), 1}, 0, 1, q("1/8"));
    CHECK(a <= q("1/2"));
    CHECK(q("1/2") <= b);
    CHECK(b - a <= q("1/8"));

    const Polynomial P3{-1728, -825, 407, 278, 58, 4};
    CHECK(P3(0) == -1728);
    CHECK(P3(1) == -1806);
    CHECK(P3(2) == 1530);
    auto [lo, hi] = isolate_root(P3, 0, 2, q("1/64"));
    CHECK(lo >= 1);
    CHECK(hi <= 2);
    CHECK(sgn(P3(lo)) * sgn(P3(hi)) <= 0);
    CHECK(descartes_sign_changes(P3) == 1);
  }

  TEST_CASE("exponential bounds, m = 2 and n = 3") {
    const ExpBounds b = lemma1_exp_bounds(2, 3);
    CHECK(b.lower_num == Polynomial{665280, 332640, 75600, 10080, 840, 42, 1});
    CHECK(b.upper_num == Polynomial{30240, 15120, 3360, 420, 30, 1});
    CHECK(b.min_x == q("1/6"));
  }

  TEST_CASE("exponential bounds hold on the validity range") {
    for (auto [m, n] : {std::pair{1u, 1u}, {2u, 3u}, {3u, 3u}}) {
      const ExpBounds b = lemma1_exp_bounds(m, n);
      for (int i = 0; i < 50; ++i) {
        // x = 1/y >= 1/(2(m+1)), y in (0, 2(m+1)]
        const Rational y = Rational(2 * (m + 1) * (i + 1), 50);
        const Enclosure e = exp_enclosure(y, 40);
        CAPTURE(m);
        CAPTURE(to_string(y));
        CHECK(b.lower_num(y) / b.lower_den(y) < e.lo());
        CHECK(e.hi() < b.upper_num(y) / b.upper_den(y));
      }
    }
  }

  TEST_CASE("F4 table and positivity") {
    const Polynomial F4 = read_polynomial(std::string(BESSELCM_DATA_DIR) + "/f4.coeffs");
    CHECK(F4.degree() == 28);
    const auto b = cargo_shisha_bounds(F4);
    CHECK(b.front() == q("4038947756777593110528000000"));
    const auto table = read_rationals(std::string(BESSELCM_DATA_DIR) + "/f4_bk.txt");
    CHECK(b == table);
    CHECK(build_F4_via_pade().F4 == F4);
    const auto cert = certify_positive_on_interval(F4, 0, 6, 1);
    CHECK(cert.verdict == Verdict::certified);
    CHECK(cert.pieces.size() == 6);
  }
}
