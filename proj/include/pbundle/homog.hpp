#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pbundle/curve.hpp"

namespace pbundle {

using Exponent = std::vector<int>;

inline int exponent_degree(const Exponent& u) {
  int s = 0;
  for (int e : u) s += e;
  return s;
}

// All exponent vectors of length n and sum d, first entry slowest.
std::vector<Exponent> monomials(int n, int d);

std::string exponent_to_string(const Exponent& u);

// Dense matrix over a commutative ring; row-major.
template <class R>
class Matrix {
 public:
  Matrix(int rows, int cols, const R& fill) : rows_(rows), cols_(cols), d_(std::size_t(rows) * cols, fill) {}

  static Matrix identity(int n, const R& zero, const R& one) {
    Matrix m(n, n, zero);
    for (int i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  R& operator()(int i, int j) { return d_[std::size_t(i) * cols_ + j]; }
  const R& operator()(int i, int j) const { return d_[std::size_t(i) * cols_ + j]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
    Matrix r(a.rows_, b.cols_, a(0, 0).zero_like());
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) r(i, j) = r(i, j) + a(i, k) * b(k, j);
      }
    return r;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] = a.d_[i] - b.d_[i];
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
  }

 private:
  int rows_, cols_;
  std::vector<R> d_;
};

// Fraction-free elimination. Needs exact_quotient(R, R) found by ADL.
template <class R>
int rank(Matrix<R> a) {
  int rk = 0;
  R prev = a(0, 0).one_like();
  for (int col = 0; col < a.cols() && rk < a.rows(); ++col) {
    int piv = -1;
    for (int i = rk; i < a.rows(); ++i)
      if (!a(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rk)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(rk, j));
    for (int i = rk + 1; i < a.rows(); ++i) {
      for (int j = col + 1; j < a.cols(); ++j)
        a(i, j) = exact_quotient(a(rk, col) * a(i, j) - a(i, col) * a(rk, j), prev);
      a(i, col) = a(i, col).zero_like();
    }
    prev = a(rk, col);
    ++rk;
  }
  return rk;
}

template <class R>
R determinant(Matrix<R> a) {
  int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  R prev = a(0, 0).one_like();
  bool neg = false;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (!a(i, k).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) return a(0, 0).zero_like();
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
      neg = !neg;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) a(i, j) = exact_quotient(a(k, k) * a(i, j) - a(i, k) * a(k, j), prev);
      a(i, k) = a(i, k).zero_like();
    }
    prev = a(k, k);
  }
  return neg ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

// Upper unipotent Jordan-type block: 1 on the diagonal, `off` on the superdiagonal.
template <class R>
Matrix<R> unipotent(int n, const R& off) {
  Matrix<R> m = Matrix<R>::identity(n, off.zero_like(), off.one_like());
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = off;
  return m;
}

template <class R>
Matrix<R> unipotent_inverse(int n, const R& off) {
  Matrix<R> m(n, n, off.zero_like());
  R step = -off;
  for (int i = 0; i < n; ++i) {
    R p = off.one_like();
    for (int j = i; j < n; ++j) {
      m(i, j) = p;
      p = p * step;
    }
  }
  return m;
}

template <FieldScalar K>
Matrix<Laurent<K>> atiyah_matrix(const CurvePtr<K>& c, int n) {
  return unipotent(n, omega(c));
}

template <FieldScalar K>
Matrix<Laurent<K>> atiyah_inverse(const CurvePtr<K>& c, int n) {
  return unipotent_inverse(n, omega(c));
}

// Homogeneous polynomial in t_0..t_{n-1} with coefficients in a ring R.
template <class R>
class HomogPoly {
 public:
  using Terms = std::map<Exponent, R>;

  HomogPoly(int nvars, int degree, R zero) : n_(nvars), d_(degree), zero_(zero.zero_like()) {}

  static HomogPoly monomial(const Exponent& u, const R& c) {
    HomogPoly p(static_cast<int>(u.size()), exponent_degree(u), c);
    p.add_term(u, c);
    return p;
  }
  static HomogPoly variable(int nvars, int i, const R& one) {
    Exponent u(nvars, 0);
    u[i] = 1;
    return monomial(u, one);
  }

  int num_vars() const { return n_; }
  int degree() const { return d_; }
  const Terms& terms() const { return t_; }
  const R& zero() const { return zero_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(const Exponent& u, const R& c) {
    if (static_cast<int>(u.size()) != n_ || exponent_degree(u) != d_)
      throw std::invalid_argument("monomial " + exponent_to_string(u) + " has wrong shape");
    if (c.is_zero()) return;
    auto it = t_.find(u);
    if (it == t_.end()) {
      t_.emplace(u, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  R coeff(const Exponent& u) const {
    auto it = t_.find(u);
    return it == t_.end() ? zero_ : it->second;
  }

  HomogPoly scaled(const R& s) const {
    HomogPoly r(n_, d_, zero_);
    for (const auto& [u, c] : t_) r.add_term(u, c * s);
    return r;
  }

  HomogPoly operator-() const { return scaled(-zero_.one_like()); }
  friend HomogPoly operator+(HomogPoly a, const HomogPoly& b) {
    a.check(b);
    for (const auto& [u, c] : b.t_) a.add_term(u, c);
    return a;
  }
  friend HomogPoly operator-(const HomogPoly& a, const HomogPoly& b) { return a + (-b); }
  friend HomogPoly operator*(const HomogPoly& a, const HomogPoly& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("variable count mismatch");
    HomogPoly r(a.n_, a.d_ + b.d_, a.zero_);
    Exponent w(a.n_);
    for (const auto& [u, c] : a.t_)
      for (const auto& [v, e] : b.t_) {
        for (int i = 0; i < a.n_; ++i) w[i] = u[i] + v[i];
        r.add_term(w, c * e);
      }
    return r;
  }
  friend bool operator==(const HomogPoly& a, const HomogPoly& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.t_ == b.t_;
  }

 private:
  void check(const HomogPoly& o) const {
    if (n_ != o.n_ || d_ != o.d_) throw std::invalid_argument("polynomial shape mismatch");
  }

  int n_, d_;
  R zero_;
  Terms t_;
};

template <class R>
R extract_coeff(const HomogPoly<R>& f, const Exponent& u) {
  if (static_cast<int>(u.size()) != f.num_vars() || exponent_degree(u) != f.degree())
    throw std::invalid_argument("exponent does not match the polynomial");
  return f.coeff(u);
}

// (Sym^d M)(F) = F o M^T: t_i -> sum_j M(j, i) t_j.
template <class R>
HomogPoly<R> sym_action(const Matrix<R>& m, const HomogPoly<R>& f) {
  int n = f.num_vars();
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("matrix size does not match variable count");
  const R& zero = f.zero();
  R one = zero.one_like();
  std::vector<HomogPoly<R>> lin;
  for (int i = 0; i < n; ++i) {
    HomogPoly<R> l(n, 1, zero);
    for (int j = 0; j < n; ++j) l = l + HomogPoly<R>::variable(n, j, one).scaled(m(j, i));
    lin.push_back(std::move(l));
  }
  std::vector<std::vector<HomogPoly<R>>> powers(n);
  auto power = [&](int i, int e) -> const HomogPoly<R>& {
    auto& ps = powers[i];
    if (ps.empty()) ps.push_back(HomogPoly<R>::monomial(Exponent(n, 0), one));
    while (static_cast<int>(ps.size()) <= e) ps.push_back(ps.back() * lin[i]);
    return ps[e];
  };
  HomogPoly<R> out(n, f.degree(), zero);
  for (const auto& [u, c] : f.terms()) {
    HomogPoly<R> t = HomogPoly<R>::monomial(Exponent(n, 0), c);
    for (int i = 0; i < n; ++i)
      if (u[i] > 0) t = t * power(i, u[i]);
    out = out + t;
  }
  return out;
}

// c * omega^power
struct OmegaCoeff {
  mpz_class coeff;
  int power = 0;
  friend bool operator==(const OmegaCoeff&, const OmegaCoeff&) = default;
};

// Coefficient of a_v in [t^u](Sym^d M)(F) for the unipotent Atiyah matrix M.
std::optional<OmegaCoeff> whichcoeffs(const Exponent& u, const Exponent& v);

template <FieldScalar K>
std::string to_string(const HomogPoly<Laurent<K>>& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += "[" + it->second.to_string() + "] *";
    for (int i = 0; i < f.num_vars(); ++i) s += " t" + std::to_string(i) + "^" + std::to_string(it->first[i]);
  }
  return s;
}

namespace detail {
std::vector<std::pair<std::string, Exponent>> split_homog_terms(std::string_view s, int nvars);
}

// Terms "[coeff] * t0^a0 t1^a1 ..." joined by '+'; missing variables have
// exponent 0, a missing coefficient is 1, "0" is the zero polynomial.
template <FieldScalar K>
HomogPoly<Laurent<K>> parse_homog(const CurvePtr<K>& c, std::string_view s, int nvars, int degree) {
  HomogPoly<Laurent<K>> f(nvars, degree, Laurent<K>(c));
  for (auto& [coeff, u] : detail::split_homog_terms(s, nvars)) {
    if (exponent_degree(u) != degree)
      throw std::invalid_argument("term " + exponent_to_string(u) + " is not of degree " + std::to_string(degree));
    f.add_term(u, parse_laurent(c, coeff));
  }
  return f;
}

}  // namespace pbundle
