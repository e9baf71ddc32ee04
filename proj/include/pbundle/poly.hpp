#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pbundle/scalar.hpp"

namespace pbundle {

// Dense univariate polynomial over a field, lowest degree first.
template <FieldScalar K>
class Poly {
 public:
  using Field = typename K::field_type;

  Poly() = default;
  explicit Poly(Field f) : f_(f) {}
  Poly(Field f, std::vector<K> c) : f_(f), c_(std::move(c)) { trim(); }

  static Poly constant(Field f, const K& c) { return Poly(f, {c}); }
  static Poly monomial(Field f, const K& c, int k) {
    std::vector<K> v(k + 1, f.from_int(0));
    v[k] = c;
    return Poly(f, std::move(v));
  }
  static Poly x(Field f) { return monomial(f, f.from_int(1), 1); }

  const Field& field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  K coeff(int i) const { return (i >= 0 && i <= degree()) ? c_[i] : f_.from_int(0); }
  K lead() const { return is_zero() ? f_.from_int(0) : c_.back(); }
  const std::vector<K>& coeffs() const { return c_; }

  Poly zero_like() const { return Poly(f_); }
  Poly one_like() const { return constant(f_, f_.from_int(1)); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), f_.from_int(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) { return *this += -o; }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.f_);
    std::vector<K> r(a.c_.size() + b.c_.size() - 1, a.f_.from_int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(a.f_, std::move(r));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const K& s) const {
    Poly r = *this;
    for (auto& c : r.c_) c *= s;
    r.trim();
    return r;
  }
  Poly shifted(int k) const {
    if (is_zero()) return *this;
    std::vector<K> v(k, f_.from_int(0));
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(f_, std::move(v));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  K operator()(const K& x) const {
    K acc = f_.from_int(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(f_);
    std::vector<K> v;
    for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * f_.from_int(static_cast<long>(i)));
    return Poly(f_, std::move(v));
  }

  Poly monic() const { return is_zero() ? *this : scaled(lead().inverse()); }

  // Order of vanishing at x0 (zero polynomial counts as infinite, reported as -1).
  int multiplicity(const K& x0) const {
    if (is_zero()) return -1;
    Poly p = *this;
    Poly lin(f_, {-x0, f_.from_int(1)});
    int m = 0;
    while (p(x0).is_zero()) {
      p = divmod(p, lin).first;
      ++m;
    }
    return m;
  }

  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += c_[i].to_string() + "*" + var + "^" + std::to_string(i);
    }
    return s;
  }

  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly q(a.f_), r = a;
    K inv = b.lead().inverse();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      int k = r.degree() - b.degree();
      K c = r.lead() * inv;
      Poly t = monomial(a.f_, c, k);
      q += t;
      r -= t * b;
    }
    return {q, r};
  }

  friend Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  Field f_{};
  std::vector<K> c_;
};

template <FieldScalar K>
Poly<K> exact_quotient(const Poly<K>& a, const Poly<K>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return q;
}

}  // namespace pbundle
