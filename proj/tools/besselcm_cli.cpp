// besselcm: command-line front end for the certification and scan routines.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "besselcm/cmdegree.hpp"
#include "besselcm/enclosure.hpp"
#include "besselcm/exactpoly.hpp"
#include "besselcm/expring.hpp"
#include "besselcm/grid.hpp"
#include "besselcm/polynomial.hpp"
#include "besselcm/rational.hpp"
#include "besselcm/reproduce.hpp"
#include "besselcm/seriesratio.hpp"
#include "besselcm/specfun.hpp"

using namespace besselcm;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;

struct RunConfig {
  int precision = 60;
  std::size_t term_cap = kTermCap;
  std::string format = "text";
  unsigned threads = 1;
  int digits = 20;     // displayed digits
  bool exact = false;  // print enclosure endpoints as exact rationals
};

/// What a subcommand produced; printed once, after the work is done.
struct Report {
  int code = kExitPass;
  json doc;
  std::ostringstream text;
  std::ostringstream csv;
  std::string csv_header = "u,lo,hi,verdict";
  bool has_csv = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string show(const RunConfig& cfg, const Enclosure& e) { return cfg.exact ? e.str(-1) : e.str(cfg.digits); }

std::string bound(const RunConfig& cfg, const Rational& x, bool up) {
  return cfg.exact ? to_string(x) : decimal_bound(x, cfg.digits, up);
}

json enc_json(const RunConfig& cfg, const Enclosure& e) {
  return {{"lo", bound(cfg, e.lo(), false)}, {"hi", bound(cfg, e.hi(), true)}};
}

void csv_row(Report& rep, const RunConfig& cfg, const Rational& u, const Enclosure& e, const std::string& verdict) {
  rep.csv << to_string(u) << ',' << bound(cfg, e.lo(), false) << ',' << bound(cfg, e.hi(), true) << ',' << verdict
          << '\n';
}

/// Width <= 10^-p relative to max(1, |value|); false means a term cap was hit first.
bool target_met(const Enclosure& e, int precision) {
  Rational scale = std::max(abs(e.lo()), abs(e.hi()));
  if (scale < 1) scale = 1;
  return e.width() <= scale / pow(Rational(10), static_cast<long>(precision));
}

std::string target_note(const RunConfig& cfg, const Enclosure& e) {
  return target_met(e, cfg.precision) ? "" : "  (precision target not reached)";
}

std::string sign_verdict(const Enclosure& e) {
  if (e.lo() >= 0) return "pass";
  if (e.hi() < 0) return "fail";
  return "indeterminate";
}

Rational rat(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

std::vector<Rational> rat_list(const std::string& text, const char* what) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(rat(item, what));
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

std::vector<Rational> grid_of(const std::string& text) {
  try {
    return make_grid(parse_grid(text));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
}

std::string resolve_data_file(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  fs::path fallback = fs::path(BESSELCM_DATA_DIR) / path;
  if (fs::path(path).is_relative() && fs::exists(fallback)) return fallback.string();
  throw UsageError("cannot open " + path);
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::certified: return kExitPass;
    case Verdict::falsified: return kExitFail;
    default: return kExitInconclusive;
  }
}

// ---------------------------------------------------------------- subcommands

struct CertifyArgs {
  std::string file, interval = "0,1", step;
  unsigned max_depth = 12;
};

void certify_poly(const RunConfig& cfg, const CertifyArgs& a, Report& rep) {
  const Polynomial p = read_polynomial(resolve_data_file(a.file));
  const auto ends = rat_list(a.interval, "--interval");
  if (ends.size() != 2) throw UsageError("--interval expects lo,hi");
  const Rational step = a.step.empty() ? Rational(ends[1] - ends[0]) : rat(a.step, "--step");
  CertifyOptions opt;
  opt.max_depth = a.max_depth;
  opt.threads = cfg.threads;
  const auto cert = certify_positive_on_interval(p, ends[0], ends[1], step, opt);
  const Rational b0 = cargo_shisha_bounds(p).front();

  rep.code = verdict_code(cert.verdict);
  rep.doc = to_json(cert);
  rep.doc["b0"] = to_string(b0);
  rep.text << "polynomial of degree " << p.degree() << " on [" << to_string(cert.lo) << ", " << to_string(cert.hi)
           << "]: " << to_string(cert.verdict) << '\n';
  for (const auto& piece : cert.pieces)
    rep.text << "  [" << to_string(piece.shift) << ", " << to_string(Rational(piece.shift + piece.width))
             << "]  min b_k = " << to_string(piece.min_bk) << " (k = " << piece.argmin << ")\n";
  if (cert.witness) rep.text << "  negative at " << to_string(*cert.witness) << '\n';
  rep.text << "b0 = " << to_string(b0) << '\n';
}

struct ShiftArgs {
  std::string file, from = "0", step = "1";
  unsigned count = 6;
};

void shift_chain(const RunConfig&, const ShiftArgs& a, Report& rep) {
  const Polynomial p = read_polynomial(resolve_data_file(a.file));
  const Rational from = rat(a.from, "--from"), step = rat(a.step, "--step");
  Polynomial current = taylor_shift(p, from);
  bool chain_ok = true;
  json rows = json::array();
  for (unsigned j = 0; j < a.count; ++j) {
    const Rational shift = from + step * j;
    const bool direct = taylor_shift(p, shift) == current;
    chain_ok = chain_ok && direct;
    const auto& c = current.coefficients();
    const bool positive = std::all_of(c.begin(), c.end(), [](const Rational& x) { return sgn(x) > 0; });
    const auto changes = descartes_sign_changes(current);
    rows.push_back({{"shift", to_string(shift)},
                    {"constant", to_string(current.coefficient(0))},
                    {"sign_changes", changes},
                    {"all_positive", positive},
                    {"composition_holds", direct}});
    rep.text << "P(u + " << to_string(shift) << "): constant " << to_string(current.coefficient(0)) << ", "
             << changes << " sign changes" << (positive ? ", all coefficients positive" : "")
             << (direct ? "" : ", COMPOSITION MISMATCH") << '\n';
    current = taylor_shift(current, step);
  }
  rep.doc = {{"shifts", rows}, {"composition_holds", chain_ok}};
  rep.code = chain_ok ? kExitPass : kExitFail;
}

struct Lemma1Args {
  unsigned m = 2, n = 3;
  std::string u;
};

void lemma1_bounds(const RunConfig& cfg, const Lemma1Args& a, Report& rep) {
  if (a.n == 0) throw UsageError("--n must be positive");
  const ExpBounds b = lemma1_exp_bounds(a.m, a.n);
  rep.doc = {{"m", a.m},
             {"n", a.n},
             {"lower_num", b.lower_num.to_string()},
             {"lower_den", b.lower_den.to_string()},
             {"upper_num", b.upper_num.to_string()},
             {"upper_den", b.upper_den.to_string()},
             {"threshold", to_string(b.min_x)}};
  rep.text << "lower: (" << b.lower_num.to_string() << ") / (" << b.lower_den.to_string() << ")\n"
           << "upper: (" << b.upper_num.to_string() << ") / (" << b.upper_den.to_string() << ")\n"
           << "threshold: " << to_string(b.min_x) << '\n';
  if (a.u.empty()) return;
  json checks = json::array();
  bool all = true;
  for (const auto& x : rat_list(a.u, "--u")) {
    const Rational ld = b.lower_den(x), ud = b.upper_den(x);
    if (sgn(ld) == 0 || sgn(ud) == 0) throw UsageError("bound denominator vanishes at " + to_string(x));
    const Rational lower = b.lower_num(x) / ld, upper = b.upper_num(x) / ud;
    const Enclosure e = exp_enclosure(x, cfg.precision);
    const bool holds = lower < e.lo() && e.hi() < upper;
    // the bounds are claimed for 0 < u <= 1/threshold
    const bool in_range = sgn(x) > 0 && x * b.min_x <= 1;
    if (in_range) all = all && holds;
    checks.push_back({{"u", to_string(x)},
                      {"lower", bound(cfg, lower, false)},
                      {"exp", enc_json(cfg, e)},
                      {"upper", bound(cfg, upper, true)},
                      {"holds", holds},
                      {"in_range", in_range}});
    rep.text << "u = " << to_string(x) << ": " << bound(cfg, lower, false) << " < e^u in " << show(cfg, e) << " < "
             << bound(cfg, upper, true) << (holds ? "  ok" : "  NOT SEPARATED")
             << (in_range ? "" : "  (outside the validity range)") << '\n';
  }
  rep.doc["checks"] = checks;
  rep.code = all ? kExitPass : kExitInconclusive;
}

void bessel(const RunConfig& cfg, unsigned k, const std::string& u_text, Report& rep) {
  json rows = json::array();
  for (const auto& u : rat_list(u_text, "--u")) {
    if (sgn(u) < 0) throw UsageError("--u must be nonnegative");
    const Enclosure e = bessel_ratio(k, u, cfg.precision);
    rows.push_back({{"k", k}, {"u", to_string(u)}, {"value", enc_json(cfg, e)}, {"target_met", target_met(e, cfg.precision)}});
    rep.text << "i_" << k << "(" << to_string(u) << ") in " << show(cfg, e) << target_note(cfg, e) << '\n';
    csv_row(rep, cfg, u, e, "value");
  }
  rep.doc = {{"function", "i_k"}, {"values", rows}};
  rep.has_csv = true;
}

void polygamma_cmd(const RunConfig& cfg, unsigned n, const std::string& x_text, const std::string& method,
                   Report& rep) {
  if (n == 0) throw UsageError("--n must be at least 1");
  const PolygammaMethod m = method == "hurwitz" ? PolygammaMethod::hurwitz : PolygammaMethod::asymptotic;
  json rows = json::array();
  for (const auto& x : rat_list(x_text, "--x")) {
    if (sgn(x) <= 0) throw UsageError("--x must be positive");
    const Enclosure e = polygamma(n, x, cfg.precision, m);
    rows.push_back({{"n", n}, {"x", to_string(x)}, {"value", enc_json(cfg, e)}, {"target_met", target_met(e, cfg.precision)}});
    rep.text << "psi^(" << n << ")(" << to_string(x) << ") in " << show(cfg, e) << target_note(cfg, e) << '\n';
    csv_row(rep, cfg, x, e, "value");
  }
  rep.doc = {{"function", "polygamma"}, {"method", method}, {"values", rows}};
  rep.has_csv = true;
}

void ktail(const RunConfig& cfg, unsigned l, const std::string& a_text, Report& rep) {
  json rows = json::array();
  for (const auto& a : rat_list(a_text, "--a")) {
    if (sgn(a) <= 0) throw UsageError("--a must be positive");
    const Enclosure e = k_tail(l, a, cfg.precision);
    rows.push_back({{"l", l}, {"a", to_string(a)}, {"value", enc_json(cfg, e)}, {"target_met", target_met(e, cfg.precision)}});
    rep.text << "K_" << l << "(" << to_string(a) << ") in " << show(cfg, e) << target_note(cfg, e) << '\n';
    csv_row(rep, cfg, a, e, "value");
  }
  rep.doc = {{"function", "K_l"}, {"numerator", k_tail_numerator(l).to_string("q")}, {"values", rows}};
  rep.has_csv = true;
}

int conjecture_code(const ConjectureReport& r) {
  if (r.counterexample) return kExitFail;
  return r.indeterminate > 0 ? kExitInconclusive : kExitPass;
}

void conjecture_text(const RunConfig& cfg, const ConjectureReport& r, Report& rep) {
  rep.doc = to_json(r);
  rep.text << r.claim << '\n';
  if (r.counterexample)
    rep.text << "counterexample at u = " << to_string(r.counterexample->first) << ": "
             << show(cfg, r.counterexample->second) << '\n';
  else
    rep.text << "no counterexample found on " << r.grid.size() << " grid points at precision " << r.precision
             << (r.indeterminate ? " (" + std::to_string(r.indeterminate) + " indeterminate)" : "") << '\n';
}

void kernel_ineq(const RunConfig& cfg, unsigned k, const std::string& grid_text, Report& rep) {
  if (k == 0) throw UsageError("--k must be at least 1");
  const auto grid = grid_of(grid_text);
  if (k >= 6) {
    const ConjectureReport r = kernel_conjecture_scan(k, grid, cfg.precision, cfg.threads);
    conjecture_text(cfg, r, rep);
    rep.code = conjecture_code(r);
    return;
  }
  const KernelCertificate cert = kernel_certificate(k, grid, cfg.precision, cfg.threads);
  json rows = json::array();
  bool any_fail = false;
  for (const auto& row : cert.rows) {
    const std::string v = sign_verdict(row.margin);
    any_fail = any_fail || v == "fail";
    rows.push_back({{"u", to_string(row.u)}, {"margin", enc_json(cfg, row.margin)}, {"verdict", v}});
    csv_row(rep, cfg, row.u, row.margin, v);
  }
  rep.has_csv = true;
  rep.doc = {{"k", k}, {"grid", grid_text}, {"rows", rows}, {"all_pass", cert.all_pass()}};
  const std::size_t passed =
      std::count_if(cert.rows.begin(), cert.rows.end(), [](const KernelRow& r) { return r.pass; });
  rep.text << "i_" << k << "(u) >= kernel^(" << k - 1 << ")(u): " << passed << "/" << cert.rows.size()
           << " grid points sign-definite\n";
  if (cert.ray) {
    const auto& ray = *cert.ray;
    rep.doc["ray"] = {{"a", to_string(ray.a)},
                      {"K4", enc_json(cfg, ray.K4)},
                      {"K3", enc_json(cfg, ray.K3)},
                      {"holds", ray.holds}};
    rep.text << "ray [" << to_string(ray.a) << ", inf): K_4 = " << show(cfg, ray.K4) << " < 1/720, K_3 = "
             << show(cfg, ray.K3) << (ray.holds ? "  certified" : "  NOT certified") << '\n';
  }
  const bool ok = cert.all_pass() && (!cert.ray || cert.ray->holds);
  rep.code = ok ? kExitPass : any_fail ? kExitFail : kExitInconclusive;
}

struct RatioArgs {
  std::string kind = "c", beta = "1", grid = "geometric:0.01,100,60";
  unsigned K = 50, k = 3;
};

void ratio_mono(const RunConfig& cfg, const RatioArgs& a, Report& rep) {
  const Rational beta = rat(a.beta, "--beta");
  if (sgn(beta) <= 0) throw UsageError("--beta must be positive");
  if (a.kind == "c" || a.kind == "C") {
    const MonotoneSequence s = a.kind == "c" ? c_ratio_sequence(beta, a.K) : C_ratio_sequence(beta, a.K);
    json values = json::array();
    for (const auto& v : s.values) values.push_back(to_string(v));
    rep.doc = {{"sequence", a.kind}, {"beta", to_string(beta)}, {"K", a.K},     {"values", values},
               {"increasing", s.increasing}, {"strict", s.strict}};
    rep.doc["first_failure"] = s.first_failure ? json(*s.first_failure) : json(nullptr);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      rep.text << a.kind << "_" << i << " = " << to_string(s.values[i]) << '\n';
      rep.csv << i << ',' << to_string(s.values[i]) << '\n';
    }
    rep.has_csv = true;
    rep.csv_header = "k,value";
    rep.text << (s.strict ? "strictly increasing" : s.increasing ? "non-decreasing" : "not monotone");
    if (s.first_failure) rep.text << " (first failure at k = " << *s.first_failure << ")";
    rep.text << '\n';
    rep.code = s.strict ? kExitPass : kExitFail;
    return;
  }
  EnclosureFunction f;
  if (a.kind == "F")
    f = [beta](const Enclosure& u, int p) { return f_beta(u, beta, p); };
  else if (a.kind == "G")
    f = [beta](const Enclosure& u, int p) { return g_beta(u, beta, p); };
  else if (a.kind == "H")
    f = [beta, k = a.k](const Enclosure& u, int p) { return h_k_beta(k, u, beta, p); };
  else
    throw UsageError("--kind must be one of c, C, F, G, H");
  const auto grid = grid_of(a.grid);
  const SlopeScan scan = scan_slopes(f, grid, cfg.precision, std::max(cfg.precision, 120), cfg.threads);
  json rows = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::string v = "last";
    if (i < scan.signs.size()) v = scan.signs[i] > 0 ? "increasing" : scan.signs[i] < 0 ? "decreasing" : "indeterminate";
    rows.push_back({{"u", to_string(grid[i])}, {"value", enc_json(cfg, scan.values[i])}, {"verdict", v}});
    csv_row(rep, cfg, grid[i], scan.values[i], v);
    rep.text << to_string(grid[i]) << '\t' << show(cfg, scan.values[i]) << '\t' << v << '\n';
  }
  rep.has_csv = true;
  rep.doc = {{"function", a.kind},          {"beta", to_string(beta)}, {"grid", a.grid},
             {"rows", rows},                {"sign_changes", scan.sign_changes}, {"definite", scan.definite}};
  rep.text << scan.sign_changes << " slope sign change(s)" << (scan.definite ? "" : ", some steps indeterminate")
           << '\n';
  rep.code = scan.definite ? kExitPass : kExitInconclusive;
}

void ladder(const RunConfig&, unsigned kmax, Report& rep) {
  if (kmax < 6) throw UsageError("--kmax must be at least 6");
  const LadderReport r = ladder_check(kmax);
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"check", f.check}, {"k", f.k}, {"index", f.index}});
  json cv = json::array();
  for (const auto& c : r.C_values) cv.push_back(c.get_str());
  rep.doc = {{"k_max", kmax}, {"checks", r.checks}, {"failures", failures}, {"C", cv}, {"ok", r.ok()}};
  rep.text << r.checks << " exact checks up to k = " << kmax << ", " << r.failures.size() << " failure(s)\n";
  for (std::size_t m = 0; m < r.C_values.size(); ++m) rep.text << "C(" << m << ") = " << r.C_values[m].get_str() << '\n';
  for (const auto& f : r.failures) rep.text << "FAIL " << f.check << " k = " << f.k << " index = " << f.index << '\n';
  rep.code = r.ok() ? kExitPass : kExitFail;
}

struct UnimodalArgs {
  std::string function = "F", beta = "1/2", lo = "1/100", hi = "60", tol = "1/1000";
};

void unimodal(const RunConfig& cfg, const UnimodalArgs& a, Report& rep) {
  const Rational beta = rat(a.beta, "--beta");
  if (sgn(beta) <= 0) throw UsageError("--beta must be positive");
  EnclosureFunction f;
  if (a.function == "F")
    f = [beta](const Enclosure& u, int p) { return f_beta(u, beta, p); };
  else if (a.function == "G")
    f = [beta](const Enclosure& u, int p) { return g_beta(u, beta, p); };
  else
    throw UsageError("--function must be F or G");
  const Rational lo = rat(a.lo, "--lo"), hi = rat(a.hi, "--hi"), tol = rat(a.tol, "--tol");
  if (!(sgn(lo) > 0 && lo < hi) || sgn(tol) <= 0) throw UsageError("need 0 < lo < hi and tol > 0");
  const UnimodalResult r = unimodal_max(f, lo, hi, tol, cfg.precision, std::max(cfg.precision, 120));
  rep.doc = {{"function", a.function},        {"beta", to_string(beta)},  {"argmax", enc_json(cfg, r.argmax)},
             {"max", enc_json(cfg, r.max)},   {"precision", r.precision}, {"converged", r.converged},
             {"evaluations", r.evaluations}};
  rep.text << "argmax in " << show(cfg, r.argmax) << "\nmax in " << show(cfg, r.max) << '\n'
           << (r.converged ? "converged" : "bracket did not reach tol") << " after " << r.evaluations
           << " evaluations\n";
  rep.code = r.converged ? kExitPass : kExitInconclusive;
}

struct CMArgs {
  std::string alpha = "1", beta = "1", r = "4", grid;
  unsigned N = 8;
  bool falsify = false;
};

void cm_check_cmd(const RunConfig& cfg, const CMArgs& a, Report& rep) {
  const Rational alpha = rat(a.alpha, "--alpha"), beta = rat(a.beta, "--beta"), r = rat(a.r, "--r");
  const auto grid = a.grid.empty() ? make_grid(default_cm_grid()) : grid_of(a.grid);
  const std::string name = "H_{" + to_string(alpha) + "," + to_string(beta) + "}";
  const CMExpression H = CMExpression::H(alpha, beta);
  if (a.falsify) {
    const FalsificationResult fr = falsify_degree(H, r, Rational(1), 24, cfg.precision);
    json scanned = json::array();
    for (const auto& t : fr.scanned) scanned.push_back(to_string(t));
    rep.doc = {{"function", name}, {"r", to_string(r)}, {"found", fr.found}, {"scanned", scanned}};
    if (fr.found) {
      rep.doc["t"] = to_string(fr.t);
      rep.doc["derivative"] = enc_json(cfg, fr.derivative);
      rep.text << "t^" << to_string(r) << " " << name << " is not completely monotonic: derivative at t = "
               << to_string(fr.t) << " in " << show(cfg, fr.derivative) << '\n';
    } else {
      rep.text << "no violation found at " << fr.scanned.size() << " points\n";
    }
    rep.code = fr.found ? kExitFail : kExitInconclusive;
    return;
  }
  CMCheckOptions opt;
  opt.precision = cfg.precision;
  opt.precision_cap = std::max(cfg.precision, 150);
  opt.threads = cfg.threads;
  const DegreeReport report = cm_check(H, r, a.N, grid, opt, name);
  rep.doc = to_json(report);
  for (const auto& c : report.cells) {
    rep.csv << c.n << ',';
    csv_row(rep, cfg, c.t, c.value, to_string(c.verdict));
  }
  rep.has_csv = true;
  rep.csv_header = "n,t,lo,hi,verdict";
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : report.cells) ++counts[static_cast<int>(c.verdict)];
  rep.text << "(-1)^n (t^" << to_string(r) << " " << name << ")^(n), n = 0.." << a.N << ", " << grid.size()
           << " points: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " indeterminate\n"
           << "summary: " << to_string(report.summary) << '\n';
  if (report.witness) {
    const auto& c = report.cells[*report.witness];
    rep.text << "witness: n = " << c.n << ", t = " << to_string(c.t) << ", value in " << show(cfg, c.value) << '\n';
  }
  rep.code = report.exit_code();
}

void p_limit(const RunConfig& cfg, const std::string& t_text, Report& rep) {
  const auto ts = rat_list(t_text, "--t");
  for (const auto& t : ts)
    if (sgn(t) <= 0) throw UsageError("--t values must be positive");
  json rows = json::array();
  bool all = true;
  for (const auto& e : p_limit_scan(ts, cfg.precision)) {
    if (!e.value) {
      all = false;
      rows.push_back({{"t", to_string(e.t)}, {"value", nullptr}, {"digits", e.digits}});
      rep.text << "p(" << to_string(e.t) << "): denominator not separated from 0\n";
      continue;
    }
    rows.push_back({{"t", to_string(e.t)}, {"value", enc_json(cfg, *e.value)}, {"digits", e.digits}});
    rep.text << "p(" << to_string(e.t) << ") in " << show(cfg, *e.value) << '\n';
    csv_row(rep, cfg, e.t, *e.value, "value");
  }
  rep.has_csv = true;
  rep.doc = {{"function", "p"}, {"values", rows}};
  rep.code = all ? kExitPass : kExitInconclusive;
}

void identity(const RunConfig&, unsigned k, unsigned N, Report& rep) {
  const IdentityReport r = verify_identity(k, N);
  rep.doc = {{"k", k}, {"N", N}, {"compared", r.compared}, {"ok", r.ok()}};
  if (r.mismatch) rep.doc["mismatch"] = {{"form", r.mismatch->first}, {"index", r.mismatch->second}};
  rep.text << r.compared << " coefficients compared exactly: " << (r.ok() ? "all equal" : "MISMATCH");
  if (r.mismatch) rep.text << " (" << r.mismatch->first << " form, index " << r.mismatch->second << ")";
  rep.text << '\n';
  rep.code = r.ok() ? kExitPass : kExitFail;
}

struct ConjectureArgs {
  std::string mode = "kernel", beta = "1", grid = "geometric:0.01,10,60";
  unsigned k = 6;
};

void conjecture_scan(const RunConfig& cfg, const ConjectureArgs& a, Report& rep) {
  const auto grid = grid_of(a.grid);
  ConjectureReport r;
  if (a.mode == "kernel") {
    if (a.k == 0) throw UsageError("--k must be at least 1");
    r = kernel_conjecture_scan(a.k, grid, cfg.precision, cfg.threads);
  } else if (a.mode == "decreasing") {
    const Rational beta = rat(a.beta, "--beta");
    if (sgn(beta) <= 0) throw UsageError("--beta must be positive");
    if (a.k < 3 || a.k > 5) throw UsageError("--k must be in 3..5 for the decreasing mode");
    r = h_decreasing_scan(a.k, beta, grid, cfg.precision, cfg.threads);
  } else {
    throw UsageError("--mode must be kernel or decreasing");
  }
  conjecture_text(cfg, r, rep);
  rep.code = conjecture_code(r);
}

void reproduce(const RunConfig& cfg, int only, bool timings, Report& rep) {
  ReproduceOptions opt;
  opt.threads = cfg.threads;
  std::vector<CriterionResult> results;
  if (only > 0) {
    if (only > kCriteria) throw UsageError("--criterion must be in 1.." + std::to_string(kCriteria));
    results.push_back(run_criterion(only, opt));
  } else {
    results = reproduce_all(opt);
  }
  json items = json::array();
  bool all = true;
  for (const auto& r : results) {
    json j = to_json(r);
    if (!timings) {
      j.erase("seconds");
      j.erase("limit_seconds");
      j.erase("passed");
    }
    items.push_back(j);
    const bool ok = timings ? r.passed : r.checks_hold;
    all = all && ok;
    if (timings) {
      rep.text << summary_line(r) << '\n';
    } else {
      rep.text << (ok ? "PASS" : "FAIL") << "  " << r.id << "  " << r.title << '\n';
    }
    for (const auto& d : r.details) rep.text << "      " << d << '\n';
  }
  rep.doc = {{"criteria", items}, {"all_pass", all}};
  rep.code = all ? kExitPass : kExitFail;
}

struct ConfigSyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Keys set by a key=value file; [section] headers prefix "section.". Throws on
/// lines that are neither comments, sections nor assignments.
std::set<std::string> config_keys(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigSyntaxError(path + " was not readable");
  static const std::regex section(R"(\s*\[\s*([A-Za-z0-9_.-]+)\s*\]\s*)");
  static const std::regex assign(R"(\s*([A-Za-z0-9_.-]+)\s*=\s*([^=\s][^=]*?)\s*)");
  std::set<std::string> keys;
  std::string line, prefix;
  for (int number = 1; std::getline(in, line); ++number) {
    std::smatch m;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (const auto c = line.find_first_not_of(" \t"); line[c] == '#' || line[c] == ';') continue;
    if (std::regex_match(line, m, section)) {
      prefix = m[1].str() + ".";
    } else if (std::regex_match(line, m, assign)) {
      keys.insert(prefix + m[1].str());
    } else {
      throw ConfigSyntaxError(path + ":" + std::to_string(number) + ": expected key = value");
    }
  }
  return keys;
}

/// Path given with --config, if any.
std::string config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

/// True when a parse error names an option whose value came from the config file.
bool blames_config(const std::string& message, const std::set<std::string>& keys, int argc, char** argv) {
  for (const auto& key : keys) {
    const std::string opt = "--" + key.substr(key.rfind('.') + 1);
    if (message.rfind(opt + ":", 0) != 0 && message.find(opt + " ") == std::string::npos) continue;
    bool on_command_line = false;
    for (int i = 1; i < argc; ++i) on_command_line = on_command_line || std::string(argv[i]).rfind(opt, 0) == 0;
    if (!on_command_line) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and interval certification of completely monotonic degree results"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig cfg;
  app.add_option("--precision", cfg.precision, "working precision in decimal digits")
      ->check(CLI::Range(10, 100000))
      ->capture_default_str();
  app.add_option("--term-cap", cfg.term_cap, "series term cap")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
  app.add_option("--digits", cfg.digits, "displayed digits")->check(CLI::Range(1, 1000))->capture_default_str();
  app.add_flag("--exact", cfg.exact, "print enclosure endpoints as exact rationals");

  std::function<void(Report&)> action;

  CertifyArgs certify;
  auto* sc = app.add_subcommand("certify-poly", "certify a polynomial positive on an interval");
  sc->add_option("--file", certify.file, "one rational coefficient per line, ascending")->required();
  sc->add_option("--interval", certify.interval, "lo,hi")->capture_default_str();
  sc->add_option("--step", certify.step, "piece width (default: whole interval)");
  sc->add_option("--max-depth", certify.max_depth, "bisection depth per piece")->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { certify_poly(cfg, certify, r); }; });

  ShiftArgs shift;
  sc = app.add_subcommand("shift-chain", "Taylor shifts P(u + from + j step) and their sign pattern");
  sc->add_option("--file", shift.file)->required();
  sc->add_option("--from", shift.from)->capture_default_str();
  sc->add_option("--count", shift.count)->capture_default_str();
  sc->add_option("--step", shift.step)->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { shift_chain(cfg, shift, r); }; });

  Lemma1Args lemma;
  sc = app.add_subcommand("lemma1-bounds", "rational lower/upper bounds for the exponential");
  sc->add_option("--m", lemma.m)->capture_default_str();
  sc->add_option("--n", lemma.n)->capture_default_str();
  sc->add_option("--u", lemma.u, "comma-separated points to check lower < e^u < upper");
  sc->callback([&] { action = [&](Report& r) { lemma1_bounds(cfg, lemma, r); }; });

  unsigned bessel_k = 1;
  std::string bessel_u = "1";
  sc = app.add_subcommand("bessel", "enclose i_k(u) = I_k(2 sqrt u) / u^(k/2)");
  sc->add_option("--k", bessel_k)->capture_default_str();
  sc->add_option("--u", bessel_u, "comma-separated")->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { bessel(cfg, bessel_k, bessel_u, r); }; });

  unsigned psi_n = 1;
  std::string psi_x = "1", psi_method = "asymptotic";
  sc = app.add_subcommand("polygamma", "enclose psi^(n)(x)");
  sc->add_option("--n", psi_n)->capture_default_str();
  sc->add_option("--x", psi_x, "comma-separated")->capture_default_str();
  sc->add_option("--method", psi_method)->check(CLI::IsMember({"asymptotic", "hurwitz"}))->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { polygamma_cmd(cfg, psi_n, psi_x, psi_method, r); }; });

  unsigned tail_l = 4;
  std::string tail_a = "7";
  sc = app.add_subcommand("ktail", "enclose K_l(a) = sum_k k^l e^(-k a)");
  sc->add_option("--l", tail_l)->capture_default_str();
  sc->add_option("--a", tail_a, "comma-separated")->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { ktail(cfg, tail_l, tail_a, r); }; });

  unsigned ineq_k = 5;
  std::string ineq_grid = "geometric:0.01,6,40";
  sc = app.add_subcommand("kernel-ineq", "i_k(u) >= (u/(1-e^-u))^(k-1) on a grid");
  sc->add_option("--k", ineq_k)->capture_default_str();
  sc->add_option("--grid", ineq_grid, "scale:lo,hi,count")->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { kernel_ineq(cfg, ineq_k, ineq_grid, r); }; });

  RatioArgs ratio;
  sc = app.add_subcommand("ratio-mono", "monotonicity of coefficient ratios or of F, G, H on a grid");
  sc->add_option("--kind", ratio.kind, "c, C (sequences) or F, G, H (functions)")->capture_default_str();
  sc->add_option("--beta", ratio.beta)->capture_default_str();
  sc->add_option("--K", ratio.K, "last sequence index")->capture_default_str();
  sc->add_option("--k", ratio.k, "order for H")->capture_default_str();
  sc->add_option("--grid", ratio.grid)->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { ratio_mono(cfg, ratio, r); }; });

  unsigned kmax = 50;
  sc = app.add_subcommand("ladder", "exact coefficient inequalities up to kmax");
  sc->add_option("--kmax", kmax)->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { ladder(cfg, kmax, r); }; });

  UnimodalArgs uni;
  sc = app.add_subcommand("unimodal-max", "golden-section maximum of F_beta or G_beta");
  sc->add_option("--function", uni.function)->capture_default_str();
  sc->add_option("--beta", uni.beta)->capture_default_str();
  sc->add_option("--lo", uni.lo)->capture_default_str();
  sc->add_option("--hi", uni.hi)->capture_default_str();
  sc->add_option("--tol", uni.tol)->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { unimodal(cfg, uni, r); }; });

  CMArgs cm;
  sc = app.add_subcommand("cm-check", "signs of (-1)^n (t^r H)^(n), H = alpha e^(beta/t) - psi'(t) - alpha");
  sc->add_option("--alpha", cm.alpha)->capture_default_str();
  sc->add_option("--beta", cm.beta)->capture_default_str();
  sc->add_option("--r", cm.r)->capture_default_str();
  sc->add_option("--N", cm.N, "highest derivative order")->capture_default_str();
  sc->add_option("--grid", cm.grid, "scale:lo,hi,count (default geometric:0.01,1000,25)");
  sc->add_flag("--falsify", cm.falsify, "search t = 1, 2, 4, ... for a positive first derivative");
  sc->callback([&] { action = [&](Report& r) { cm_check_cmd(cfg, cm, r); }; });

  std::string plimit_t = "10,100,1000,10000,100000";
  sc = app.add_subcommand("p-limit", "enclose p(t) at large t");
  sc->add_option("--t", plimit_t, "comma-separated")->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { p_limit(cfg, plimit_t, r); }; });

  unsigned id_k = 0, id_N = 40;
  sc = app.add_subcommand("verify-identity", "termwise check of the two integral representations");
  sc->add_option("--k", id_k)->capture_default_str();
  sc->add_option("--N", id_N)->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { identity(cfg, id_k, id_N, r); }; });

  ConjectureArgs conj;
  sc = app.add_subcommand("conjecture-scan", "search a grid for counterexamples (never a proof)");
  sc->add_option("--mode", conj.mode, "kernel or decreasing")->capture_default_str();
  sc->add_option("--k", conj.k)->capture_default_str();
  sc->add_option("--beta", conj.beta)->capture_default_str();
  sc->add_option("--grid", conj.grid)->capture_default_str();
  sc->callback([&] { action = [&](Report& r) { conjecture_scan(cfg, conj, r); }; });

  int criterion = 0;
  bool timings = false;
  sc = app.add_subcommand("reproduce-paper", "run every acceptance check in order");
  sc->add_option("--criterion", criterion, "run a single criterion");
  sc->add_flag("--timings", timings, "include run times and limits");
  sc->callback([&] { action = [&](Report& r) { reproduce(cfg, criterion, timings, r); }; });

  std::set<std::string> keys;
  if (const std::string path = config_path(argc, argv); !path.empty()) {
    try {
      keys = config_keys(path);
    } catch (const ConfigSyntaxError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CLI::FileError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (blames_config(e.what(), keys, argc, argv)) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  set_term_cap(cfg.term_cap);
  Report rep;
  try {
    action(rep);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInconclusive;
  }

  if (cfg.format == "json") {
    std::cout << rep.doc.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    if (!rep.has_csv) {
      std::cerr << "error: csv output is not available for this subcommand\n";
      return kExitUsage;
    }
    std::cout << rep.csv_header << '\n' << rep.csv.str();
  } else {
    std::cout << rep.text.str();
  }
  return rep.code;
}
