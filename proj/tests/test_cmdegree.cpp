#include <doctest.h>

#include "besselcm/cmdegree.hpp"
#include "besselcm/grid.hpp"
#include "besselcm/specfun.hpp"

using namespace besselcm;

namespace {

Rational q(const char* s) { return parse_rational(s); }

std::vector<Rational> small_grid() { return make_grid(parse_grid("geometric:0.1,100,8")); }

}  // namespace

TEST_SUITE("cmdegree") {
  TEST_CASE("expression algebra") {
    const auto H = CMExpression::H(1, 1);
    CHECK(H.terms().size() == 3);
    CHECK((H - H).is_zero());
    CHECK(CMExpression::H(2, 1) - CMExpression::H(1, 1) ==
          CMExpression::term(1, 0, Atom::exponential(1)) - CMExpression::term(1, 0));
    // d/dt t^3 = 3 t^2, d/dt e^{2/t} = -2 t^-2 e^{2/t}, d/dt psi' = psi''
    CHECK(CMExpression::term(1, 3).derivative() == CMExpression::term(3, 2));
    CHECK(CMExpression::term(1, 0, Atom::exponential(2)).derivative() ==
          CMExpression::term(-2, -2, Atom::exponential(2)));
    CHECK(CMExpression::term(1, 0, Atom::psi(1)).derivative() == CMExpression::term(1, 0, Atom::psi(2)));
    CHECK(CMExpression::term(1, 0).derivative().is_zero());
    CHECK(H.times_power(q("1/2")).times_power(q("-1/2")) == H);
  }

  TEST_CASE("symbolic derivative matches finite differences") {
    const auto H = CMExpression::H(1, 1);
    const auto dH = H.derivative();
    const Rational h = q("1/100000");
    const auto d3 = dH.derivative().derivative();
    for (int t : {1, 3}) {
      const Enclosure fd = (H(Rational(t) + h, 40) - H(Rational(t) - h, 40)) / Enclosure(2 * h);
      // centered error h^2/6 |f'''(xi)|; f''' changes by far less than a factor 2 on [t-h, t+h]
      const Rational bound = h * h / 6 * 2 * abs(d3(Rational(t), 40)).hi();
      CHECK(abs(fd - dH(Rational(t), 40)).hi() <= bound);
    }
  }

  TEST_CASE("evaluation of H at a point") {
    // H_{1,1}(1) = e - pi^2/6 - 1
    const Enclosure v = CMExpression::H(1, 1)(Rational(1), 40);
    const Enclosure ref = exp_enclosure(Rational(1), 45) - sqr(pi_enclosure()) / Enclosure(6) - Enclosure(1);
    CHECK(v.overlaps(ref));
    CHECK(v.width() < q("1e-35"));
  }

  TEST_CASE("zero expression passes at every r") {
    const CMExpression zero;
    const auto grid = small_grid();
    for (const char* r : {"0", "4", "100"}) CHECK(cm_check(zero, q(r), 4, grid).summary == CellVerdict::pass);
    const auto d = empirical_degree(zero, {Rational(1), Rational(10)}, 3, grid);
    CHECK(d.infinite);
  }

  TEST_CASE("pass at r implies pass below r") {
    const auto H = CMExpression::H(1, 1);
    const auto grid = small_grid();
    const auto at4 = cm_check(H, 4, 4, grid);
    REQUIRE(at4.summary == CellVerdict::pass);
    CHECK(at4.exit_code() == 0);
    CHECK(at4.cells.size() == 5 * grid.size());
    for (const char* r : {"0", "1", "5/2", "7/2"}) CHECK(cm_check(H, q(r), 4, grid).summary == CellVerdict::pass);
  }

  TEST_CASE("degree pairs") {
    struct Case {
      const char *alpha, *beta, *r;
    };
    for (const Case c : {Case{"1", "1", "4"}, Case{"1/2", "2", "2"}, Case{"2", "1", "1"}}) {
      const auto H = CMExpression::H(q(c.alpha), q(c.beta));
      CAPTURE(c.alpha);
      CAPTURE(c.beta);
      CHECK(cm_check(H, q(c.r), 6, small_grid()).summary == CellVerdict::pass);
      const auto above = falsify_degree(H, q(c.r) + q("1/2"));
      CHECK(above.found);
      CHECK(above.derivative.positive());
    }
  }

  TEST_CASE("fail report has a witness and exit code 1") {
    const auto r = cm_check(CMExpression::H(1, 1), 5, 3, small_grid());
    CHECK(r.summary == CellVerdict::fail);
    REQUIRE(r.witness);
    CHECK(r.cells[*r.witness].verdict == CellVerdict::fail);
    CHECK(r.exit_code() == 1);
    const auto j = to_json(r);
    CHECK(j["summary"] == "fail");
    CHECK(j["cells"].size() == r.cells.size());
    for (const char* key : {"function", "r", "N", "grid", "cells"}) CHECK(j.contains(key));
  }

  TEST_CASE("negative function fails at n = 0") {
    const auto f = CMExpression::term(-1, 0);
    const auto r = cm_check(f, 0, 2, small_grid());
    CHECK(r.summary == CellVerdict::fail);
    CHECK(r.cells[*r.witness].n == 0);
  }

  TEST_CASE("parallel cm_check is identical to serial") {
    CMCheckOptions serial, parallel;
    parallel.threads = 4;
    const auto a = to_json(cm_check(CMExpression::H(1, 1), 4, 4, small_grid(), serial));
    const auto b = to_json(cm_check(CMExpression::H(1, 1), 4, 4, small_grid(), parallel));
    CHECK(a.dump() == b.dump());
  }

  TEST_CASE("p(t) tends to 4") {
    const auto rows = p_limit_scan({q("1/2"), Rational(1), Rational(100000)});
    for (const auto& e : rows) {
      REQUIRE(e.value);
      CHECK(e.value->positive());
    }
    CHECK(abs(*rows.back().value - Enclosure(4)).hi() < q("1e-3"));
  }

  TEST_CASE("kernel inequality, k = 1..5 and the ray") {
    const auto grid = make_grid(parse_grid("geometric:0.01,6.9,40"));
    for (unsigned k = 1; k <= 5; ++k) {
      const auto cert = kernel_certificate(k, grid);
      CAPTURE(k);
      CHECK(cert.all_pass());
    }
    const auto five = kernel_certificate(5, grid);
    REQUIRE(five.ray);
    CHECK(five.ray->holds);
    CHECK(five.ray->K4.hi() < q("1/720"));
    CHECK(five.ray->K3.nonnegative());
  }

  TEST_CASE("k = 6 conjecture has a counterexample") {
    const auto r = kernel_conjecture_scan(6, make_grid(parse_grid("geometric:0.01,1,30")));
    REQUIRE(r.counterexample);
    CHECK(r.counterexample->second.negative());
    const auto j = to_json(r);
    CHECK(j.contains("claim"));
    CHECK(!j["counterexample"].is_null());
  }

  TEST_CASE("H_{3,1} decreasing scan reports no counterexample") {
    const auto r = h_decreasing_scan(3, 1, make_grid(parse_grid("geometric:0.1,10,12")));
    CHECK(!r.counterexample);
    CHECK(to_json(r)["counterexample"].is_null());
  }

  TEST_CASE("integral representations agree termwise") {
    for (unsigned k = 0; k <= 6; ++k) {
      const auto r = verify_identity(k, 40);
      CAPTURE(k);
      CHECK(r.ok());
      CHECK(r.compared > 0);
    }
  }

  TEST_CASE("degree prediction") {
    CHECK(predict_degree(1, 1).label == "4");
    CHECK(predict_degree(1, 1).constant == q("1/24"));
    CHECK(predict_degree(q("1/2"), 2).label == "2");
    CHECK(predict_degree(q("1/2"), 2).constant == q("1/2"));
    CHECK(predict_degree(2, 1).label == "1");
    CHECK(predict_degree(2, 1).constant == 1);
    CHECK(predict_degree(q("1/2"), 1).label == "not CM");
  }

  TEST_CASE("remark on V_1: assemblies, checks and quadrature") {
    const auto r = remark_vn_degree_check(make_grid(parse_grid("geometric:0.1,100,6")));
    CHECK(r.assembly_n1);
    CHECK(r.assembly_n3);
    CHECK(r.check_n1.summary == CellVerdict::pass);
    CHECK(r.check_n3.summary == CellVerdict::pass);
    CHECK(r.quadrature_agrees);
    CHECK(r.ok());
  }

  TEST_CASE("h(t) > 1 and the kernel representation") {
    const auto r = h_kernel_check(make_grid(parse_grid("geometric:0.01,6,10")), {Rational(2)});
    CHECK(r.ok);
    for (const auto& [t, hm1] : r.h_values) CHECK(hm1.positive());  // h(t) - 1
    REQUIRE(r.quadrature.size() == 1);
    CHECK(std::get<1>(r.quadrature[0]).overlaps(std::get<2>(r.quadrature[0])));
  }

  TEST_CASE("degree conditions are consistent") {
    const auto grid = make_grid(parse_grid("geometric:0.1,100,6"));
    for (auto [a, b] : {std::pair{"1", "1"}, {"1/2", "2"}, {"2", "1"}}) {
      const auto r = degree_conditions_check(q(a), q(b), grid, 5);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(r.consistent);
    }
  }
}
