#include "besselcm/reproduce.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "besselcm/cmdegree.hpp"
#include "besselcm/exactpoly.hpp"
#include "besselcm/expring.hpp"
#include "besselcm/grid.hpp"
#include "besselcm/polynomial.hpp"
#include "besselcm/seriesratio.hpp"
#include "besselcm/specfun.hpp"

namespace besselcm {

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

struct Ctx {
  const ReproduceOptions& opt;
  CriterionResult& res;
  bool ok = true;

  void check(bool cond, const std::string& what) {
    res.details.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
    ok = ok && cond;
  }
  std::string path(const char* name) const { return opt.data_dir + "/" + name; }
};

std::vector<std::string> raw_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

// 1. b_k reproduction
void bk_table(Ctx& c) {
  const Polynomial F4 = read_polynomial(c.path("f4.coeffs"));
  const auto bk = cargo_shisha_bounds(F4);
  const auto table = raw_lines(c.path("f4_bk.txt"));
  c.check(bk.size() == 29 && table.size() == 29, "29 bounds b_0..b_28");
  c.check(to_string(bk.front()) == "4038947756777593110528000000", "b_0 = 4038947756777593110528000000");
  c.check(to_string(bk.back()) == "4334548991696365872138512296", "b_28 = 4334548991696365872138512296");
  std::size_t same = 0;
  for (std::size_t k = 0; k < std::min(bk.size(), table.size()); ++k) same += to_string(bk[k]) == table[k];
  c.check(same == 29, "byte-exact match with the transcribed table: " + std::to_string(same) + "/29");
}

// 2. positivity of F4 on [0, 6]
void f4_positivity(Ctx& c) {
  const Polynomial F4 = read_polynomial(c.path("f4.coeffs"));
  CertifyOptions o;
  o.threads = c.opt.threads;
  const auto cert = certify_positive_on_interval(F4, 0, 6, 1, o);
  c.check(cert.verdict == Verdict::certified, "certify_positive_on_interval(F4, 0, 6, 1) -> " + to_string(cert.verdict));
  c.check(cert.pieces.size() == 6, std::to_string(cert.pieces.size()) + " unit pieces, none bisected");
  bool bounds = true;
  for (const auto& p : cert.pieces) bounds = bounds && sgn(p.min_bk) > 0;
  c.check(bounds, "every piece has min b_k > 0");
  Polynomial step = F4;
  bool shifts = true;
  for (int j = 1; j <= 5; ++j) {
    step = taylor_shift(step, 1);
    shifts = shifts && step == taylor_shift(F4, j);
  }
  c.check(shifts, "F4(u+j) = shift^j(F4, 1) for j = 1..5");
}

// 3. F3 algebra and the rational substitution
void f3_algebra(Ctx& c) {
  const FChain chain = build_F_chain();
  bool zeros = chain.zeros.size() == 7;
  for (const auto& [name, v] : chain.zeros) zeros = zeros && sgn(v) == 0;
  c.check(zeros, "seven exact zeros at u = 0 through the F1 -> F3 chain");
  const F4Build b = build_F4_via_pade();
  const Polynomial F4 = read_polynomial(c.path("f4.coeffs"));
  const auto diff = first_difference(b.F4, F4);
  c.check(!diff, "F4 rebuilt from the m = 2, n = 3 exponential bounds matches all 29 coefficients");
  const Polynomial d5{-30240, 15120, -3360, 420, -30, 1};
  const Polynomial d6{665280, -332640, 75600, -10080, 840, -42, 1};
  c.check(b.denominator == d5.pow(2) * d6.pow(3), "denominator = (deg-5 factor)^2 (deg-6 factor)^3");
}

// 4. kernel inequality, k = 1..5
void kernel_inequality(Ctx& c) {
  const auto grid = make_grid(parse_grid("geometric:0.01,6.9,40"));
  for (unsigned k = 1; k <= 5; ++k) {
    const auto cert = kernel_certificate(k, grid, 30, c.opt.threads);
    std::size_t pass = 0;
    for (const auto& r : cert.rows) pass += r.pass;
    c.check(pass == grid.size(), "k = " + std::to_string(k) + ": i_k - kernel^(k-1) > 0 at " + std::to_string(pass) +
                                     "/" + std::to_string(grid.size()) + " points");
    if (k == 5) {
      c.check(cert.ray && cert.ray->holds && cert.ray->K4.hi() < q(1, 720),
              "ray [7, inf): K_4(7) in " + (cert.ray ? cert.ray->K4.str(8) : std::string("?")) + " < 1/720");
    }
  }
}

// 5. coefficient ratio monotonicity
void ratio_monotonicity(Ctx& c) {
  const auto cs = c_ratio_sequence(1, 201);
  bool strict = true;
  for (unsigned k = 1; k <= 200; ++k) strict = strict && cs.values[k + 1] > cs.values[k];
  c.check(cs.increasing && strict, "c_{k+1}(1) > c_k(1) for 1 <= k <= 200");
  c.check(cs.values[0] == 1 && cs.values[1] == 1, "c_1(1) = c_0(1) = 1: the k = 0 step is an equality since c_1 - c_0 = (beta-1)/4");
  const auto Cs = C_ratio_sequence(q(1, 2), 101);
  c.check(Cs.strict, "C_{k+1}(1/2) > C_k(1/2) for 0 <= k <= 100");
  c.check(Cs.values[1] - Cs.values[0] == q(19, 240), "C_1(1/2) - C_0(1/2) = 19/240");
  bool spots = true;
  for (const Rational& b : {q(1, 2), q(1), q(7, 3)}) {
    spots = spots && c_coeff(1, b) == (3 + b) / 4;
    spots = spots && C_coeff(0)(b) == (b - 1) / 3;
    spots = spots && C_coeff(1)(b) == (b * b + 4 * b - 4) / 20;
    spots = spots && c_coeff(2, b) == (14 + 8 * b + b * b) / 22;
  }
  c.check(spots, "c_1, c_2, C_0, C_1 closed forms at beta = 1/2, 1, 7/3");
}

// 6. the exact ladder
void ladder(Ctx& c) {
  const auto rep = ladder_check(50);
  std::string first = rep.failures.empty() ? "" : " (first: " + rep.failures.front().check + ")";
  c.check(rep.ok(), std::to_string(rep.checks) + " exact checks up to k = 50, " + std::to_string(rep.failures.size()) +
                        " failures" + first);
  const std::vector<Integer> C{Integer("181440"),      Integer("10160640"),    Integer("252316512"),
                               Integer("4549288320"),  Integer("68981774400"), Integer("939390217920")};
  c.check(rep.C_values == C, "C(0..5) = 181440, 10160640, 252316512, 4549288320, 68981774400, 939390217920");
  c.check(ladder_M(0, 4) == 2318400, "M_0(4) = 2318400");
  c.check(ladder_U(4) == 4074, "U_4 = 4074");
}

// 7. limits
void limits(Ctx& c) {
  const Enclosure tiny(q(1, 1000000));
  for (const Rational& b : {q(1, 2), q(1), q(2)}) {
    const Enclosure v = f_beta(tiny, b, 30);
    c.check(v.lo() > 1 - q(1, 10000) && v.hi() < 1 + q(1, 10000),
            "F_" + to_string(b) + "(1e-6) in " + v.str(10) + " within 1e-4 of 1");
  }
  const Enclosure f100 = f_beta(Enclosure(q(100)), 1, 30);
  c.check(f100.hi() < q(1, 1000), "F_1(100) in " + f100.str(8) + " < 1e-3");
  const Enclosure h = CMExpression::H(1, 1)(100, 30);
  c.check(h.positive() && h.hi() < q(1, 100), "h(100) - 1 in " + h.str(12) + " inside (0, 1e-2)");
  const auto p = p_limit_scan({q(100000)}, 30);
  const bool p_ok = p[0].value && p[0].value->lo() > 4 - q(1, 1000) && p[0].value->hi() < 4 + q(1, 1000);
  c.check(p_ok, "p(1e5) in " + (p[0].value ? p[0].value->str(10) : std::string("?")) + " within 1e-3 of 4");
}

// 8. degree pass/fail pairs
void degrees(Ctx& c) {
  const auto grid = make_grid(default_cm_grid());
  CMCheckOptions o;
  o.threads = c.opt.threads;
  const struct {
    Rational alpha, beta, r;
  } cases[] = {{1, 1, 4}, {q(1, 2), 2, 2}, {2, 1, 1}};
  for (const auto& k : cases) {
    const std::string name = "H_{" + to_string(k.alpha) + "," + to_string(k.beta) + "}";
    const CMExpression H = CMExpression::H(k.alpha, k.beta);
    const auto rep = cm_check(H, k.r, 8, grid, o, name);
    c.check(rep.summary == CellVerdict::pass,
            name + ": t^" + to_string(k.r) + " H passes n = 0..8 on the 25-point grid (" + to_string(rep.summary) + ")");
    const auto f = falsify_degree(H, k.r + q(1, 2));
    c.check(f.found, name + ": t^" + to_string(k.r + q(1, 2)) + " H refuted" +
                         (f.found ? " at t = " + to_string(f.t) + ", derivative in " + f.derivative.str(8) : ""));
  }
}

// 9. termwise identities
void identities(Ctx& c) {
  bool all = true;
  std::size_t compared = 0;
  for (unsigned k = 0; k <= 6; ++k) {
    const auto r = verify_identity(k, 40);
    all = all && r.ok();
    compared += r.compared;
  }
  c.check(all, "both integral representations, k = 0..6, N = 40: " + std::to_string(compared) + " coefficients equal");
}

// 10. unimodality and conditions
void unimodality(Ctx& c) {
  const Rational half = q(1, 2);
  EnclosureFunction F = [half](const Enclosure& u, int p) { return f_beta(u, half, p); };
  const auto m = unimodal_max(F, q(1, 100), 60, q(1, 1000000), 30);
  c.check(m.max.lo() > 1, "max F_{1/2} in " + m.max.str(10) + " > 1, attained near u in " + m.argmax.str(6));
  const auto grid = make_grid(parse_grid("geometric:0.01,100,60"));
  EnclosureFunction G1 = [](const Enclosure& u, int p) { return g_beta(u, 1, p); };
  const auto s1 = scan_slopes(G1, grid, 30, 120, c.opt.threads);
  bool down = s1.definite;
  for (int s : s1.signs) down = down && s < 0;
  c.check(down, "G_1 strictly decreasing along a 60-point log grid on [0.01, 100]");
  EnclosureFunction Gh = [half](const Enclosure& u, int p) { return g_beta(u, half, p); };
  const auto sh = scan_slopes(Gh, grid, 30, 120, c.opt.threads);
  c.check(sh.definite && sh.sign_changes == 1,
          "G_{1/2} slope changes sign " + std::to_string(sh.sign_changes) + " time(s) on the same grid");
}

// 11. root and sign remarks
void sign_remarks(Ctx& c) {
  // u^5 Q_5(-1/u) from the Pade denominators, against the printed polynomial.
  const Polynomial q5 = pade_q(5);
  std::vector<Rational> f6(6);
  for (int k = 0; k <= 5; ++k) f6[k] = q5.coefficient(5 - k) * ((5 - k) % 2 ? -1 : 1);
  const Polynomial F6(f6);
  c.check(F6 == Polynomial{-30240, 15120, -3360, 420, -30, 1}, "u^5 Q_5(-1/u) = u^5 - 30u^4 + 420u^3 - 3360u^2 + 15120u - 30240");
  c.check(F6(6) == -864 && F6(8) == 608, "F6(6) = -864, F6(8) = 608");
  const auto root = isolate_root(F6, 6, 8, q(1, 64));
  c.check(descartes_sign_changes(reflect(F6)) == 0 && root.first >= 6 && root.second <= 8,
          "F6 has no negative roots; its sign change in (6, 8) isolated to [" + to_string(root.first) + ", " +
              to_string(root.second) + "]");
  const Polynomial P1{-756, 12, 323, 36, 1};
  const Polynomial P2{252, 24, -99, 10, 1};
  const Polynomial P3{-1728, -825, 407, 278, 58, 4};
  c.check(P1(0) == -756 && P1(2) == 864, "P1(0) = -756, P1(2) = 864");
  c.check(P2(0) == 252 && P2(3) == -216 && P2(6) == 288, "P2(0) = 252, P2(3) = -216, P2(6) = 288");
  // The printed "P3(1) = 1530" is the value at m = 2; P3(1) = -1806. The root is in (1, 2).
  c.check(P3(0) == -1728 && P3(1) == -1806 && P3(2) == 1530,
          "P3(0) = -1728, P3(2) = 1530 (the value printed for m = 1; P3(1) = -1806)");
  c.check(descartes_sign_changes(P1) == 1 && descartes_sign_changes(P2) == 2 && descartes_sign_changes(P3) == 1,
          "Descartes sign changes 1 / 2 / 1 for P1 / P2 / P3");
}

struct Spec {
  const char* title;
  double limit;
  void (*run)(Ctx&);
};

const Spec kSpecs[kCriteria] = {
    {"b_k reproduction", 1, bk_table},
    {"F4 positivity chain", 5, f4_positivity},
    {"F3 algebra", 10, f3_algebra},
    {"kernel inequality k = 1..5", 30, kernel_inequality},
    {"ratio monotonicity", 20, ratio_monotonicity},
    {"ladder", 30, ladder},
    {"limits", 30, limits},
    {"degrees", 180, degrees},
    {"exact identities", 1, identities},
    {"unimodality and conditions", 60, unimodality},
    {"root and sign remarks", 1, sign_remarks},
};

}  // namespace

CriterionResult run_criterion(int id, const ReproduceOptions& options) {
  if (id < 1 || id > kCriteria) throw std::out_of_range("criterion id out of range");
  const Spec& spec = kSpecs[id - 1];
  CriterionResult res;
  res.id = id;
  res.title = spec.title;
  res.limit_seconds = spec.limit;
  Ctx ctx{options, res};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    spec.run(ctx);
  } catch (const std::exception& e) {
    ctx.check(false, std::string("exception: ") + e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.checks_hold = ctx.ok;
  res.passed = ctx.ok && res.seconds <= res.limit_seconds;
  return res;
}

std::vector<CriterionResult> reproduce_all(const ReproduceOptions& options,
                                           const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    out.push_back(run_criterion(id, options));
    if (progress) progress(out.back());
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << "  (";
  os.setf(std::ios::fixed);
  os.precision(2);
  os << r.seconds << " s, limit " << r.limit_seconds << " s)";
  if (r.checks_hold && !r.passed) os << "  over time limit";
  return os.str();
}

nlohmann::json to_json(const CriterionResult& r) {
  return {{"id", r.id},           {"title", r.title},
          {"passed", r.passed},   {"checks_hold", r.checks_hold},
          {"seconds", r.seconds}, {"limit_seconds", r.limit_seconds},
          {"details", r.details}};
}

}  // namespace besselcm
