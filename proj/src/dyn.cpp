#include "pbundle/dyn.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pbundle {

std::string RatInterval::to_string() const {
  if (exact()) return lo.get_str();
  return "[" + lo.get_str() + ", " + hi.get_str() + "]";
}

std::string poly_to_string(const IntPoly& p) {
  std::string out;
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
    if (p[k] == 0) continue;
    mpz_class c = p[k];
    if (!out.empty()) {
      out += c < 0 ? " - " : " + ";
      c = abs(c);
    } else if (c < 0) {
      out += "-";
      c = -c;
    }
    if (k == 0 || c != 1) out += c.get_str() + (k > 0 ? "*" : "");
    if (k >= 1) out += "x";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

namespace {

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of a by b (b nonzero).
RatPoly rem(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    mpq_class f = a.back() / b.back();
    std::size_t sh = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[sh + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

// Integer polynomials for root isolation: rational Sturm chains blow up quickly.
using ZPoly = std::vector<mpz_class>;

void ztrim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_primitive(ZPoly& p) {
  ztrim(p);
  mpz_class g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1)
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

ZPoly to_integer(const RatPoly& p) {
  mpz_class l = 1;
  for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  ZPoly out;
  for (const auto& c : p) out.push_back(mpz_class(c * l));
  make_primitive(out);
  return out;
}

ZPoly zderivative(const ZPoly& p) {
  ZPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<unsigned long>(k));
  ztrim(d);
  return d;
}

// Positive multiple of a mod b: each step scales by |lc(b)| so signs survive.
ZPoly zprem(ZPoly a, const ZPoly& b) {
  ztrim(a);
  mpz_class lb = abs(b.back());
  int sb = sgn(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    mpz_class la = a.back();
    std::size_t sh = a.size() - b.size();
    for (auto& c : a) c *= lb;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (sb > 0) a[sh + k] -= la * b[k];
      else a[sh + k] += la * b[k];
    }
    a.pop_back();
    ztrim(a);
    make_primitive(a);
  }
  return a;
}

ZPoly zgcd(ZPoly a, ZPoly b) {
  make_primitive(a);
  make_primitive(b);
  while (!b.empty()) {
    ZPoly r = zprem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// a / b, exact in Z[x] when b is primitive and divides a.
ZPoly zquot(ZPoly a, const ZPoly& b) {
  ztrim(a);
  if (a.size() < b.size()) return {};
  ZPoly q(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t sh = a.size() - b.size();
    mpz_class f;
    mpz_divexact(f.get_mpz_t(), a.back().get_mpz_t(), b.back().get_mpz_t());
    q[sh] = f;
    for (std::size_t k = 0; k < b.size(); ++k) a[sh + k] -= f * b[k];
    a.pop_back();
    ztrim(a);
  }
  return q;
}

// sign of p(n/d), d > 0, via d^deg p(n/d) in Z
int zsign(const ZPoly& p, const mpq_class& x) {
  if (p.empty()) return 0;
  const mpz_class &n = x.get_num(), &d = x.get_den();
  mpz_class r = p.back(), dp = 1;
  for (int i = static_cast<int>(p.size()) - 2; i >= 0; --i) {
    dp *= d;
    r = r * n + p[i] * dp;
  }
  return sgn(r);
}

std::vector<ZPoly> sturm_chain(const ZPoly& p) {
  std::vector<ZPoly> s{p, zderivative(p)};
  make_primitive(s.back());
  while (!s.back().empty()) {
    ZPoly r = zprem(s[s.size() - 2], s.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    s.push_back(std::move(r));
  }
  if (s.back().empty()) s.pop_back();
  return s;
}

int sign_changes(const std::vector<ZPoly>& s, const mpq_class& x) {
  int n = 0, last = 0;
  for (const auto& p : s) {
    int v = zsign(p, x);
    if (v == 0) continue;
    if (last != 0 && v != last) ++n;
    last = v;
  }
  return n;
}

mpq_class pow2(int e) {
  mpq_class r = 1;
  if (e >= 0) mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), e);
  else mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), -e);
  return r;
}

}  // namespace

RatPoly charpoly(const Matrix<Q>& a) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("charpoly needs a square matrix");
  RatPoly c(n + 1, 0);
  c[n] = 1;
  Q zero(0), one(1);
  Matrix<Q> m(n, n, zero);
  for (int k = 1; k <= n; ++k) {
    Matrix<Q> am = a * m;
    for (int i = 0; i < n; ++i) am(i, i) = am(i, i) + Q(c[n - k + 1]);
    m = am;
    Matrix<Q> t = a * m;
    mpq_class tr = 0;
    for (int i = 0; i < n; ++i) tr += t(i, i).value();
    c[n - k] = -tr / k;
  }
  return c;
}

std::optional<RatInterval> largest_positive_root(const RatPoly& p0, int bits) {
  ZPoly p = to_integer(p0);
  if (p.size() <= 1) return std::nullopt;
  ZPoly sf = zquot(p, zgcd(p, zderivative(p)));
  make_primitive(sf);
  auto s = sturm_chain(sf);
  mpq_class bound = 0;
  for (std::size_t k = 0; k + 1 < sf.size(); ++k) bound = std::max<mpq_class>(bound, mpq_class(abs(sf[k]), abs(sf.back())));
  mpq_class lo = 0, hi = bound + 1;
  auto count = [&](const mpq_class& a, const mpq_class& b) { return sign_changes(s, a) - sign_changes(s, b); };
  if (count(lo, hi) == 0) return std::nullopt;
  // Invariant: the largest root lies in (lo, hi].
  mpq_class tol = pow2(-bits);
  while (hi - lo > tol) {
    if (zsign(sf, hi) == 0) return RatInterval::point(hi);
    mpq_class mid = (lo + hi) / 2;
    if (count(mid, hi) > 0) lo = mid;
    else hi = mid;
  }
  if (zsign(sf, hi) == 0) return RatInterval::point(hi);
  // Integer or small-denominator root inside the final interval.
  for (long den = 1; den <= 64; ++den) {
    mpz_class num;
    mpq_class scaled = hi * den;
    mpz_fdiv_q(num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    mpq_class cand(num, den);
    cand.canonicalize();
    if (cand > lo && cand <= hi && zsign(sf, cand) == 0) return RatInterval::point(cand);
  }
  return RatInterval{lo, hi};
}

RatInterval sqrt_interval(const mpq_class& q, int bits) {
  if (q < 0) throw std::invalid_argument("sqrt of a negative number");
  mpz_class n = q.get_num(), d = q.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
    mpq_class r(sqrt(n), sqrt(d));
    r.canonicalize();
    return RatInterval::point(r);
  }
  mpq_class scaled = q * pow2(2 * bits);
  mpz_class fl, cl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  mpz_cdiv_q(cl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  mpz_class lo = sqrt(fl);
  mpz_class hi = sqrt(cl);
  if (hi * hi < cl) hi += 1;
  mpq_class den = pow2(bits);
  return {mpq_class(lo) / den, mpq_class(hi) / den};
}

RatInterval spectral_radius(const Matrix<Q>& a) {
  int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("spectral_radius needs a square matrix");
  if (n == 0) return RatInterval::point(0);
  // rho^2 is the largest positive eigenvalue of Sym^2 A: |a|^2 = a * conj(a) and a^2 are both eigenvalues.
  std::vector<std::pair<int, int>> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) basis.emplace_back(i, j);
  int m = static_cast<int>(basis.size());
  Matrix<Q> s(m, m, Q(0));
  for (int col = 0; col < m; ++col) {
    auto [i, j] = basis[col];
    for (int row = 0; row < m; ++row) {
      auto [k, l] = basis[row];
      mpq_class v = a(k, i).value() * a(l, j).value();
      if (k != l) v += a(l, i).value() * a(k, j).value();
      s(row, col) = Q(v);
    }
  }
  auto r2 = largest_positive_root(charpoly(s));
  if (!r2) return RatInterval::point(0);
  if (r2->exact()) return sqrt_interval(r2->lo);
  auto lo = sqrt_interval(r2->lo), hi = sqrt_interval(r2->hi);
  return {lo.lo, hi.hi};
}

RatInterval spectral_radius(const IntMatrix& a) {
  Matrix<Q> m(static_cast<int>(a.rows()), static_cast<int>(a.cols()), Q(0));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = Q(mpq_class(static_cast<long>(a(i, j))));
  return spectral_radius(m);
}

Matrix<Q> companion(const IntPoly& p0) {
  IntPoly p = p0;
  while (!p.empty() && p.back() == 0) p.pop_back();
  int n = static_cast<int>(p.size()) - 1;
  if (n < 1) throw std::invalid_argument("companion matrix needs degree >= 1");
  Matrix<Q> c(n, n, Q(0));
  for (int i = 1; i < n; ++i) c(i, i - 1) = Q(1);
  for (int i = 0; i < n; ++i) c(i, n - 1) = Q(mpq_class(-p[i], p[n]));
  return c;
}

std::pair<RatInterval, RatInterval> root_modulus_range(const IntPoly& p0) {
  IntPoly p = p0;
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.size() < 2) throw std::invalid_argument("root moduli need degree >= 1");
  RatInterval mx = spectral_radius(companion(p));
  if (p[0] == 0) return {RatInterval::point(0), mx};
  IntPoly rev(p.rbegin(), p.rend());
  RatInterval inv = spectral_radius(companion(rev));
  return {RatInterval{1 / inv.hi, 1 / inv.lo}, mx};
}

RatInterval product_formula(const RatInterval& lambda_g, long d) {
  if (d < 1) throw std::invalid_argument("fibre degree must be positive");
  if (lambda_g.lo < 1) throw std::invalid_argument("dynamical degree must be at least 1");
  mpq_class dq = d;
  if (lambda_g.lo >= dq) return lambda_g;
  if (lambda_g.hi <= dq) return RatInterval::point(dq);
  return {dq, lambda_g.hi};
}

std::string Annihilator::to_string() const {
  if (primitive.size() <= 1) return content.get_str();
  std::string inner = poly_to_string(primitive);
  if (content == 1) return inner;
  return content.get_str() + "*(" + inner + ")";
}

namespace {

Annihilator build_annihilator(mpz_class content, IntPoly prim) {
  Annihilator a;
  a.content = content;
  a.primitive = prim;
  for (auto& c : prim) c *= content;
  a.coeffs = std::move(prim);
  a.degenerate = a.coeffs.size() <= 1;
  return a;
}

mpz_class zpow(long d, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Annihilator annihilator_from_indices(int j, int ell, long d) {
  if (ell < 1) throw std::invalid_argument("ell must be at least 1");
  if (d < 1 || j < 0) throw std::invalid_argument("need d >= 1 and j >= 0");
  IntPoly prim(ell);
  for (int k = 0; k < ell; ++k) prim[k] = zpow(d, ell - 1 - k);
  return build_annihilator(zpow(d, j + 1), std::move(prim));
}

Annihilator annihilator_q_chain(int j, int ell, long d) {
  if (ell < 1) throw std::invalid_argument("ell must be at least 1");
  if (d < 1 || j < 0) throw std::invalid_argument("need d >= 1 and j >= 0");
  IntPoly prim(ell + 1, 0);
  prim[0] = -zpow(d, ell);
  prim[ell] = 1;
  return build_annihilator(zpow(d, j), std::move(prim));
}

void PicLattice::validate() const {
  auto n = static_cast<Eigen::Index>(generators.size());
  if (action.rows() != n || action.cols() != n)
    throw std::invalid_argument("action must be a square matrix of size equal to the generator count");
  std::vector<std::string> sorted = generators;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("duplicate generator label");
  for (const auto& [g, ord] : torsion) {
    if (std::find(generators.begin(), generators.end(), g) == generators.end())
      throw std::invalid_argument("torsion relation for unknown generator '" + g + "'");
    if (ord < 1) throw std::invalid_argument("torsion order must be positive");
  }
  auto fr = free_generators();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!torsion.count(generators[j])) continue;
    for (int i : fr)
      if (action(i, j) != 0)
        throw std::invalid_argument("inconsistent torsion relations: g^* of torsion class '" + generators[j] +
                                    "' has a non-torsion component");
  }
  for (const auto* seq : {&p_indices, &q_indices})
    for (int k : *seq)
      if (k < 0) throw std::invalid_argument("index sequences must be non-negative");
}

std::vector<int> PicLattice::free_generators() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(generators.size()); ++i)
    if (!torsion.count(generators[i])) out.push_back(i);
  return out;
}

IntMatrix PicLattice::free_action() const {
  auto fr = free_generators();
  IntMatrix m(fr.size(), fr.size());
  for (std::size_t i = 0; i < fr.size(); ++i)
    for (std::size_t j = 0; j < fr.size(); ++j) m(i, j) = action(fr[i], fr[j]);
  return m;
}

namespace {

std::optional<std::pair<int, int>> first_repeat(const std::vector<int>& seq) {
  for (int k = 1; k < static_cast<int>(seq.size()); ++k)
    for (int j = 0; j < k; ++j)
      if (seq[j] == seq[k]) return std::make_pair(j, k - j);
  return std::nullopt;
}

}  // namespace

DegreeBoundVerdict check_degree_bound(const PicLattice& lat, long d) {
  lat.validate();
  if (d < 1) throw std::invalid_argument("fibre degree must be positive");
  DegreeBoundVerdict v;
  IntMatrix fa = lat.free_action();
  v.rho = spectral_radius(fa);
  v.confirmed = v.rho.contains(mpq_class(d));
  v.reason = v.confirmed ? "spectral radius on V equals the fibre degree"
                         : "spectral radius on V is " + v.rho.to_string() + ", not " + std::to_string(d);
  if (lat.lambda1_g) {
    v.sqrt_lambda1 = sqrt_interval(*lat.lambda1_g);
    v.tir_consistent = v.rho.lo <= v.sqrt_lambda1->hi + kTirTolerance;
    if (!v.tir_consistent) v.reason += "; inconsistent data: spectral radius exceeds sqrt(lambda1_g)";
  }
  RatPoly cp;
  if (fa.rows() > 0) {
    Matrix<Q> m(static_cast<int>(fa.rows()), static_cast<int>(fa.rows()), Q(0));
    for (int i = 0; i < fa.rows(); ++i)
      for (int j = 0; j < fa.cols(); ++j) m(i, j) = Q(mpq_class(static_cast<long>(fa(i, j))));
    cp = charpoly(m);
  } else {
    cp = {1};
  }
  auto add_chain = [&](const std::string& name, const std::vector<int>& seq) {
    if (seq.empty()) return;
    auto rep = first_repeat(seq);
    if (!rep) throw std::invalid_argument(name + "-index sequence has no repeated index");
    RelationChain c;
    c.sequence = name;
    c.j = rep->first;
    c.ell = rep->second;
    c.annihilator = name == "p" ? annihilator_from_indices(c.j, c.ell, d) : annihilator_q_chain(c.j, c.ell, d);
    RatPoly a(c.annihilator.primitive.begin(), c.annihilator.primitive.end());
    c.divides_charpoly = rem(cp, a).empty();
    v.chains.push_back(std::move(c));
  };
  add_chain("p", lat.p_indices);
  add_chain("q", lat.q_indices);
  return v;
}

DynReport dyn_report(const PicLattice& lat, int fibre_degree) {
  if (!lat.lambda1_g) throw std::invalid_argument("lambda1_g is required for a dynamical report");
  auto v = check_degree_bound(lat, fibre_degree);
  DynReport r;
  r.fibre_degree = fibre_degree;
  r.lambda1_g = RatInterval::point(*lat.lambda1_g);
  r.lambda1_f = product_formula(r.lambda1_g, fibre_degree);
  r.spectral_radius_V = v.rho;
  r.tir_consistent = v.tir_consistent;
  return r;
}

}  // namespace pbundle
