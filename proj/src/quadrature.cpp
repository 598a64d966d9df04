#include "besselcm/quadrature.hpp"

#include <stdexcept>

#include "besselcm/specfun.hpp"

namespace besselcm {

Jet Jet::constant(const Enclosure& value, std::size_t order) {
  std::vector<Enclosure> c(order + 1, Enclosure(0));
  c[0] = value;
  return Jet(std::move(c));
}

Jet Jet::variable(const Enclosure& x, std::size_t order) {
  Jet j = constant(x, order);
  if (order >= 1) j.c_[1] = Enclosure(1);
  return j;
}

Enclosure Jet::derivative(std::size_t j) const { return c_[j] * Enclosure(Rational(factorial(j))); }

Jet& Jet::operator+=(const Jet& b) {
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += b.c_[j];
  return *this;
}

Jet& Jet::operator-=(const Jet& b) {
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= b.c_[j];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const std::size_t n = a.c_.size();
  std::vector<Enclosure> c(n, Enclosure(0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= k; ++i) c[k] += a.c_[i] * b.c_[k - i];
  return Jet(std::move(c));
}

Jet operator/(const Jet& a, const Jet& b) {
  const std::size_t n = a.c_.size();
  std::vector<Enclosure> q(n, Enclosure(0));
  for (std::size_t k = 0; k < n; ++k) {
    Enclosure acc = a.c_[k];
    for (std::size_t i = 1; i <= k; ++i) acc -= b.c_[i] * q[k - i];
    q[k] = acc / b.c_[0];
  }
  return Jet(std::move(q));
}

Jet operator*(Jet a, const Enclosure& s) {
  for (auto& c : a.c_) c *= s;
  return a;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Jet exp(const Jet& f, int precision) {
  const std::size_t n = f.order() + 1;
  std::vector<Enclosure> e(n, Enclosure(0));
  e[0] = exp_enclosure(f[0], precision);
  for (std::size_t k = 1; k < n; ++k) {
    Enclosure acc(0);
    for (std::size_t i = 1; i <= k; ++i) acc += Enclosure(Rational(i)) * f[i] * e[k - i];
    e[k] = acc / Enclosure(Rational(k));
  }
  return Jet(std::move(e));
}

Jet bessel_jet(unsigned k, const Enclosure& x, std::size_t order, int precision) {
  std::vector<Enclosure> c;
  c.reserve(order + 1);
  for (std::size_t j = 0; j <= order; ++j)
    c.push_back(bessel_ratio(k + static_cast<unsigned>(j), x, precision) / Enclosure(Rational(factorial(j))));
  return Jet(std::move(c));
}

namespace {

struct SimpsonPiece {
  Enclosure value;
  Rational width;  // of value
};

SimpsonPiece simpson_piece(const JetFunction& f, const Rational& a, const Rational& b) {
  const Rational h = b - a;
  const Rational m = (a + b) / 2;
  Enclosure fa = f(Jet::variable(Enclosure(a), 0)).value();
  Enclosure fm = f(Jet::variable(Enclosure(m), 0)).value();
  Enclosure fb = f(Jet::variable(Enclosure(b), 0)).value();
  Enclosure s = (fa + fm * Enclosure(4) + fb) * Enclosure(h / 6);
  Enclosure d4 = f(Jet::variable(Enclosure(a, b), 4)).derivative(4);
  Enclosure err = d4 * Enclosure(-pow(h, 5) / 2880);
  Enclosure v = s + err;
  return {v, v.width()};
}

}  // namespace

QuadratureResult integrate_simpson(const JetFunction& f, const Rational& a, const Rational& b, const Rational& tol,
                                   std::size_t max_pieces) {
  if (!(a < b)) throw std::invalid_argument("integrate_simpson: need a < b");
  const Rational length = b - a;
  QuadratureResult result;
  result.value = Enclosure(0);
  // Depth-first, left to right: deterministic summation order.
  std::vector<std::pair<Rational, Rational>> stack{{a, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    SimpsonPiece p = simpson_piece(f, lo, hi);
    const Rational budget = tol * (hi - lo) / length;
    if (p.width > budget && result.pieces + stack.size() + 2 <= max_pieces) {
      Rational mid = (lo + hi) / 2;
      stack.emplace_back(mid, hi);
      stack.emplace_back(lo, mid);
      continue;
    }
    if (p.width > budget) result.converged = false;
    result.value += p.value;
    ++result.pieces;
  }
  return result;
}

}  // namespace besselcm
