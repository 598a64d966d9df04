#include "besselcm/exactpoly.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "besselcm/parallel.hpp"

namespace besselcm {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified:
      return "certified";
    case Verdict::falsified:
      return "falsified";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json to_json(const PositivityCertificate& cert) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : cert.pieces)
    pieces.push_back({{"shift", to_string(p.shift)},
                      {"width", to_string(p.width)},
                      {"min_bk", to_string(p.min_bk)},
                      {"argmin", p.argmin},
                      {"max_bk", to_string(p.max_bk)}});
  nlohmann::json j = {{"verdict", to_string(cert.verdict)},
                      {"interval", {to_string(cert.lo), to_string(cert.hi)}},
                      {"pieces", pieces}};
  j["witness"] = cert.witness ? nlohmann::json(to_string(*cert.witness)) : nlohmann::json(nullptr);
  return j;
}

Rational poly_eval(const Polynomial& p, const Rational& x) { return p(x); }

std::size_t descartes_sign_changes(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("sign changes of the zero polynomial");
  std::size_t changes = 0;
  int last = 0;
  for (const auto& c : p.coefficients()) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<Rational> cargo_shisha_bounds(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("Bernstein bounds of the zero polynomial");
  const auto& a = p.coefficients();
  const unsigned long n = a.size() - 1;
  std::vector<Rational> weighted(n + 1);
  for (unsigned long l = 0; l <= n; ++l) weighted[l] = a[l] / Rational(binomial(n, l));
  std::vector<Rational> b(n + 1);
  for (unsigned long k = 0; k <= n; ++k) {
    Rational s = 0;
    for (unsigned long l = 0; l <= k; ++l) s += weighted[l] * binomial(k, l);
    b[k] = s;
  }
  return b;
}

namespace {

struct PieceOutcome {
  std::vector<PieceReport> leaves;
  std::optional<Rational> witness;
  bool all_certified = true;
};

void examine_piece(const Polynomial& p, const Rational& start, const Rational& width, unsigned depth,
                   const CertifyOptions& options, PieceOutcome& out) {
  Polynomial local = scale_argument(taylor_shift(p, start), width);
  PieceReport rep{start, width, 0, 0, 0};
  if (local.is_zero()) {
    out.leaves.push_back(rep);
    out.all_certified = false;
    if (!out.witness) out.witness = start;
    return;
  }
  std::vector<Rational> b = cargo_shisha_bounds(local);
  auto [mn, mx] = std::minmax_element(b.begin(), b.end());
  rep.min_bk = *mn;
  rep.max_bk = *mx;
  rep.argmin = static_cast<std::size_t>(mn - b.begin());
  if (sgn(rep.min_bk) > 0) {
    out.leaves.push_back(rep);
    return;
  }
  // Exact witness search on a uniform sample of the piece (endpoints included).
  const unsigned samples = std::max(2u, options.witness_samples);
  for (unsigned j = 0; j <= samples; ++j) {
    Rational v(j, samples);
    v.canonicalize();
    if (sgn(local(v)) <= 0) {
      out.leaves.push_back(rep);
      out.all_certified = false;
      if (!out.witness) out.witness = start + width * v;
      return;
    }
  }
  if (depth >= options.max_depth) {
    out.leaves.push_back(rep);
    out.all_certified = false;
    return;
  }
  Rational half = width / 2;
  examine_piece(p, start, half, depth + 1, options, out);
  if (out.witness) return;
  examine_piece(p, start + half, half, depth + 1, options, out);
}

}  // namespace

PositivityCertificate certify_positive_on_interval(const Polynomial& p, const Rational& lo, const Rational& hi,
                                                   const Rational& step, const CertifyOptions& options) {
  if (!(lo < hi)) throw std::invalid_argument("certify_positive_on_interval: need lo < hi");
  if (sgn(step) <= 0) throw std::invalid_argument("certify_positive_on_interval: need step > 0");

  std::vector<std::pair<Rational, Rational>> pieces;
  for (Rational a = lo; a < hi; a += step) pieces.emplace_back(a, std::min(Rational(step), Rational(hi - a)));

  std::vector<PieceOutcome> outcomes(pieces.size());
  parallel_for(pieces.size(), options.threads, [&](std::size_t i) {
    examine_piece(p, pieces[i].first, pieces[i].second, 0, options, outcomes[i]);
  });

  PositivityCertificate cert;
  cert.lo = lo;
  cert.hi = hi;
  bool all = true;
  for (auto& o : outcomes) {
    for (auto& leaf : o.leaves) cert.pieces.push_back(std::move(leaf));
    if (!cert.witness && o.witness) cert.witness = o.witness;
    all = all && o.all_certified;
  }
  cert.verdict = cert.witness ? Verdict::falsified : all ? Verdict::certified : Verdict::inconclusive;
  return cert;
}

std::pair<Rational, Rational> isolate_root(const Polynomial& p, Rational lo, Rational hi, const Rational& width) {
  if (!(lo < hi)) throw std::invalid_argument("isolate_root: need lo < hi");
  if (sgn(width) <= 0) throw std::invalid_argument("isolate_root: need width > 0");
  int slo = sgn(p(lo));
  int shi = sgn(p(hi));
  if (slo == 0 || shi == 0 || slo == shi)
    throw std::invalid_argument("isolate_root: endpoint values must be nonzero with opposite signs");
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    int s = sgn(p(mid));
    if (s == 0) return {mid, mid};
    if (s == slo)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

Polynomial pade_q(unsigned n) {
  std::vector<Rational> c(n + 1);
  Integer nf = factorial(n);
  for (unsigned k = 0; k <= n; ++k) {
    Rational ck(binomial(n, k) * factorial(2 * n - k), nf);
    ck.canonicalize();
    c[n - k] = ck;
  }
  return Polynomial(std::move(c));
}

namespace {

// u^deg * Q(s/u) with s = +1 or -1, i.e. the coefficient-reversed polynomial.
Polynomial reversed(const Polynomial& q, int s) {
  const auto& c = q.coefficients();
  const std::size_t n = c.size() - 1;
  std::vector<Rational> r(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    // x^j term becomes u^(n-j) * s^j
    Rational v = c[j];
    if (s < 0 && (j % 2 == 1)) v = -v;
    r[n - j] = v;
  }
  return Polynomial(std::move(r));
}

}  // namespace

ExpBounds lemma1_exp_bounds(unsigned m, unsigned n) {
  if (n == 0) throw std::invalid_argument("lemma1_exp_bounds: n must be positive");
  ExpBounds b;
  b.q_even = pade_q(2 * n);
  b.q_odd = pade_q(2 * m + 1);
  b.lower_num = reversed(b.q_even, +1);
  b.lower_den = reversed(b.q_even, -1);
  b.upper_num = reversed(b.q_odd, +1);
  b.upper_den = -reversed(b.q_odd, -1);
  b.min_x = Rational(1, 2 * (m + 1));
  b.min_x.canonicalize();
  return b;
}

std::vector<Rational> read_rationals(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Rational> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_rational(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Polynomial read_polynomial(const std::string& path) { return Polynomial(read_rationals(path)); }

}  // namespace besselcm
