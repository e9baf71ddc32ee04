#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "pbundle/poly.hpp"

namespace pbundle {

// Legendre curve y^2 = x(x-1)(x-lambda).
template <FieldScalar K>
struct Curve {
  typename K::field_type field;
  K lambda;
  Poly<K> g;

  K root(int i) const { return i == 0 ? field.from_int(0) : i == 1 ? field.from_int(1) : lambda; }
};

template <FieldScalar K>
using CurvePtr = std::shared_ptr<const Curve<K>>;

template <FieldScalar K>
CurvePtr<K> make_curve(typename K::field_type f, K lambda) {
  unsigned long p = f.characteristic();
  if (p == 2 || p == 3) throw std::invalid_argument("characteristic 2 and 3 are not supported");
  lambda = lambda + f.from_int(0);
  if (lambda.is_zero() || lambda == f.from_int(1))
    throw std::invalid_argument("lambda must differ from 0 and 1");
  using P = Poly<K>;
  P x = P::x(f);
  P g = x * (x - P::constant(f, f.from_int(1))) * (x - P::constant(f, lambda));
  return std::make_shared<const Curve<K>>(Curve<K>{f, lambda, g});
}

template <FieldScalar K>
bool same_curve(const CurvePtr<K>& a, const CurvePtr<K>& b) {
  return a == b || (a && b && a->field == b->field && a->lambda == b->lambda);
}

// Element (a + b*y) / y^m of k[x, y, 1/y] modulo the curve relation,
// kept in lowest terms so equality is structural.
template <FieldScalar K>
class Laurent {
 public:
  using P = Poly<K>;

  explicit Laurent(CurvePtr<K> c) : c_(std::move(c)), a_(c_->field), b_(c_->field) {}

  static Laurent from_parts(CurvePtr<K> c, P a, P b, int m) {
    if (m < 0) {
      lift(a, b, -m, c->g);
      m = 0;
    }
    Laurent h(std::move(c));
    h.a_ = std::move(a);
    h.b_ = std::move(b);
    h.m_ = m;
    h.normalize();
    return h;
  }
  static Laurent constant(CurvePtr<K> c, const K& v) {
    auto f = c->field;
    return from_parts(std::move(c), P::constant(f, v), P(f), 0);
  }
  static Laurent integer(CurvePtr<K> c, long v) {
    auto f = c->field;
    return constant(std::move(c), f.from_int(v));
  }
  static Laurent from_poly(CurvePtr<K> c, P a) {
    auto f = c->field;
    return from_parts(std::move(c), std::move(a), P(f), 0);
  }
  static Laurent x(CurvePtr<K> c) { return from_poly(c, P::x(c->field)); }
  static Laurent y(CurvePtr<K> c) {
    auto f = c->field;
    return from_parts(std::move(c), P(f), P::constant(f, f.from_int(1)), 0);
  }

  const CurvePtr<K>& curve() const { return c_; }
  const P& a() const { return a_; }
  const P& b() const { return b_; }
  int y_power() const { return m_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  Laurent zero_like() const { return Laurent(c_); }
  Laurent one_like() const { return integer(c_, 1); }

  Laurent operator-() const { return from_parts(c_, -a_, -b_, m_); }
  friend Laurent operator+(const Laurent& u, const Laurent& v) {
    check(u, v);
    int m = std::max(u.m_, v.m_);
    P a1 = u.a_, b1 = u.b_, a2 = v.a_, b2 = v.b_;
    lift(a1, b1, m - u.m_, u.c_->g);
    lift(a2, b2, m - v.m_, u.c_->g);
    return from_parts(u.c_, a1 + a2, b1 + b2, m);
  }
  friend Laurent operator-(const Laurent& u, const Laurent& v) { return u + (-v); }
  friend Laurent operator*(const Laurent& u, const Laurent& v) {
    check(u, v);
    if (u.is_zero() || v.is_zero()) return Laurent(u.c_);
    const P& g = u.c_->g;
    P a = u.a_ * v.a_ + u.b_ * v.b_ * g;
    P b = u.a_ * v.b_ + u.b_ * v.a_;
    return from_parts(u.c_, std::move(a), std::move(b), u.m_ + v.m_);
  }
  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }
  Laurent scaled(const K& s) const { return from_parts(c_, a_.scaled(s), b_.scaled(s), m_); }

  friend bool operator==(const Laurent& u, const Laurent& v) {
    return same_curve(u.c_, v.c_) && u.m_ == v.m_ && u.a_ == v.a_ && u.b_ == v.b_;
  }

  // Units of the ring are c * x^i (x-1)^j (x-lambda)^k * y^l.
  std::optional<Laurent> inverse() const {
    if (is_zero()) return std::nullopt;
    P n = a_ * a_ - b_ * b_ * c_->g;
    auto [pre, rest] = split_unit_part(n);
    if (!rest.is_constant()) return std::nullopt;
    K cinv = rest.lead().inverse();
    // 1/h = y^m (a - b y) / N
    Laurent r = from_parts(c_, a_.scaled(cinv), (-b_).scaled(cinv), -m_);
    return r * pre;
  }

  std::string to_string() const {
    return "((" + a_.to_string() + ") + (" + b_.to_string() + ")*y) / y^" + std::to_string(m_);
  }

  // For n = c * x^i (x-1)^j (x-lambda)^k * rest, returns (1 / (x^i (x-1)^j (x-lambda)^k), rest).
  std::pair<Laurent, P> split_unit_part(P n) const {
    const auto& f = c_->field;
    P x = P::x(f);
    Laurent inv = one_like();
    for (int t = 0; t < 3; ++t) {
      K r = c_->root(t);
      int e = n.multiplicity(r);
      if (e <= 0) continue;
      P lin = x - P::constant(f, r);
      P other = P::constant(f, f.from_int(1));
      for (int s = 0; s < 3; ++s)
        if (s != t) other = other * (x - P::constant(f, c_->root(s)));
      P lp = P::constant(f, f.from_int(1)), op = lp;
      for (int q = 0; q < e; ++q) {
        lp = lp * lin;
        op = op * other;
      }
      n = exact_quotient(n, lp);
      inv = inv * from_parts(c_, op, P(f), 2 * e);
    }
    return {inv, n};
  }

 private:
  static void check(const Laurent& u, const Laurent& v) {
    if (!same_curve(u.c_, v.c_)) throw std::invalid_argument("curve mismatch");
  }
  // Multiply the numerator a + b*y by y^k.
  static void lift(P& a, P& b, int k, const P& g) {
    for (int i = 0; i + 1 < k; i += 2) {
      a = a * g;
      b = b * g;
    }
    if (k % 2 == 1) {
      P na = b * g;
      b = std::move(a);
      a = std::move(na);
    }
  }
  void normalize() {
    while (m_ > 0) {
      if (is_zero()) {
        m_ = 0;
        break;
      }
      auto [q, r] = divmod(a_, c_->g);
      if (!r.is_zero()) break;
      a_ = std::move(b_);
      b_ = std::move(q);
      --m_;
    }
  }

  CurvePtr<K> c_;
  P a_, b_;
  int m_ = 0;
};

template <FieldScalar K>
Laurent<K> pow(const Laurent<K>& h, int n) {
  Laurent<K> base = h;
  if (n < 0) {
    auto inv = h.inverse();
    if (!inv) throw std::domain_error("negative power of a non-unit");
    base = *inv;
    n = -n;
  }
  Laurent<K> r = h.one_like();
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

template <FieldScalar K>
Laurent<K> exact_quotient(const Laurent<K>& num, const Laurent<K>& den) {
  using P = Poly<K>;
  if (den.is_zero()) throw std::domain_error("division by zero");
  if (auto inv = den.inverse()) return num * *inv;
  const auto& c = den.curve();
  // num / den = num * y^m * (a - b y) / N with N = a^2 - b^2 g in k[x].
  P n = den.a() * den.a() - den.b() * den.b() * c->g;
  Laurent<K> t = num * Laurent<K>::from_parts(c, den.a(), -den.b(), -den.y_power());
  auto [uinv, rest] = den.split_unit_part(n);
  auto [qa, ra] = divmod(t.a(), rest);
  auto [qb, rb] = divmod(t.b(), rest);
  if (!ra.is_zero() || !rb.is_zero()) throw std::domain_error("inexact division in coordinate ring");
  return Laurent<K>::from_parts(c, qa, qb, t.y_power()) * uinv;
}

template <FieldScalar K>
Laurent<K> omega(const CurvePtr<K>& c) {
  using P = Poly<K>;
  return Laurent<K>::from_parts(c, P::monomial(c->field, c->field.from_int(1), 2), P(c->field), 1);
}

template <FieldScalar K>
int val_at_O(const Laurent<K>& h) {
  if (h.is_zero()) throw std::domain_error("valuation of zero");
  int v = 1 << 30;
  if (!h.a().is_zero()) v = std::min(v, -2 * h.a().degree());
  if (!h.b().is_zero()) v = std::min(v, -3 - 2 * h.b().degree());
  return v + 3 * h.y_power();
}

template <FieldScalar K>
struct PointSpec {
  enum class Tag { O, T0, T1, T2, Affine };
  Tag tag = Tag::O;
  K x0{}, y0{};

  static PointSpec at_O() { return {Tag::O, {}, {}}; }
  static PointSpec torsion(int i) { return {static_cast<Tag>(1 + i), {}, {}}; }
  static PointSpec affine(K x, K y) { return {Tag::Affine, x, y}; }
};

template <FieldScalar K>
int val_at_point(const Laurent<K>& h, const PointSpec<K>& p) {
  using P = Poly<K>;
  using Tag = typename PointSpec<K>::Tag;
  if (h.is_zero()) throw std::domain_error("valuation of zero");
  const auto& c = h.curve();
  const auto& f = c->field;
  if (p.tag == Tag::O) return val_at_O(h);
  int ti = -1;
  K x0 = p.x0 + f.from_int(0), y0 = p.y0 + f.from_int(0);
  if (p.tag != Tag::Affine) {
    ti = static_cast<int>(p.tag) - 1;
    x0 = c->root(ti);
    y0 = f.from_int(0);
  } else {
    if (!(y0 * y0 == c->g(x0))) throw std::invalid_argument("point is not on the curve");
    for (int t = 0; t < 3; ++t)
      if (y0.is_zero() && x0 == c->root(t)) ti = t;
  }
  if (ti >= 0) {
    // y is a uniformizer and x - x0 has valuation 2.
    int v = 1 << 30;
    if (!h.a().is_zero()) v = std::min(v, 2 * h.a().multiplicity(x0));
    if (!h.b().is_zero()) v = std::min(v, 2 * h.b().multiplicity(x0) + 1);
    return v - h.y_power();
  }
  // y is a unit here; x - x0 is a uniformizer.
  P a = h.a(), b = h.b();
  int e = 1 << 30;
  if (!a.is_zero()) e = std::min(e, a.multiplicity(x0));
  if (!b.is_zero()) e = std::min(e, b.multiplicity(x0));
  P lin(f, {-x0, f.from_int(1)});
  for (int i = 0; i < e; ++i) {
    if (!a.is_zero()) a = exact_quotient(a, lin);
    if (!b.is_zero()) b = exact_quotient(b, lin);
  }
  K conj = a(x0) - b(x0) * y0;
  if (conj.is_zero()) return e;
  return e + (a * a - b * b * c->g).multiplicity(x0);
}

template <FieldScalar K>
bool is_regular_U(const Laurent<K>& h) {
  return h.y_power() == 0;
}

template <FieldScalar K>
bool is_regular_V(const Laurent<K>& h) {
  return h.is_zero() || val_at_O(h) >= 0;
}

template <FieldScalar K>
std::optional<K> as_scalar(const Laurent<K>& h) {
  if (!is_regular_U(h) || !is_regular_V(h)) return std::nullopt;
  if (!h.b().is_zero() || !h.a().is_constant())
    throw std::logic_error("function regular on both charts is not constant");
  return h.a().coeff(0);
}

// Value at an affine point; y0 must be nonzero when the element has a y-power.
template <FieldScalar K>
K evaluate(const Laurent<K>& h, const K& x0, const K& y0) {
  K num = h.a()(x0) + h.b()(x0) * y0;
  K den = h.a().field().from_int(1);
  for (int i = 0; i < h.y_power(); ++i) den = den * y0;
  return num / den;
}

namespace detail {

template <FieldScalar K>
class LaurentParser {
 public:
  LaurentParser(const CurvePtr<K>& c, std::string_view s) : c_(c), s_(s) {}

  Laurent<K> run() {
    Laurent<K> v = expr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("cannot parse '" + std::string(s_) + "': " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char ch) {
    skip();
    if (i_ < s_.size() && s_[i_] == ch) {
      ++i_;
      return true;
    }
    return false;
  }
  Laurent<K> expr() {
    Laurent<K> v = eat('-') ? -term() : (eat('+'), term());
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  Laurent<K> term() {
    Laurent<K> v = factor();
    for (;;) {
      if (eat('*')) {
        v = v * factor();
      } else if (eat('/')) {
        Laurent<K> d = factor();
        auto inv = d.inverse();
        if (!inv) fail("division by a non-unit");
        v = v * *inv;
      } else {
        return v;
      }
    }
  }
  long integer() {
    skip();
    bool neg = eat('-');
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (st == i_) fail("expected an integer exponent");
    long v = std::stol(std::string(s_.substr(st, i_ - st)));
    return neg ? -v : v;
  }
  Laurent<K> factor() {
    if (eat('-')) return -factor();
    Laurent<K> v = primary();
    if (eat('^')) v = pow(v, static_cast<int>(integer()));
    return v;
  }
  Laurent<K> primary() {
    skip();
    if (eat('(')) {
      Laurent<K> v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (i_ >= s_.size()) fail("unexpected end");
    char ch = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      mpz_class z(std::string(s_.substr(st, i_ - st)));
      return Laurent<K>::constant(c_, c_->field.from_mpz(z));
    }
    if (ch == 'x') {
      ++i_;
      return Laurent<K>::x(c_);
    }
    if (ch == 'y') {
      ++i_;
      return Laurent<K>::y(c_);
    }
    if (ch == 'w') {
      ++i_;
      return omega(c_);
    }
    fail(std::string("unexpected '") + ch + "'");
  }

  CurvePtr<K> c_;
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

// Accepts the canonical "((a) + (b)*y) / y^m" form and general expressions in
// x, y, w (= omega), integers, + - * ^, and division by units.
template <FieldScalar K>
Laurent<K> parse_laurent(const CurvePtr<K>& c, std::string_view s) {
  return detail::LaurentParser<K>(c, s).run();
}

}  // namespace pbundle
