#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbundle/bundles.hpp"

namespace pbundle {

// Laurent value times a product of formal torsion / non-torsion symbols.
template <FieldScalar K>
struct FormalScalar {
  Laurent<K> value;
  GroupElem twist;
};

template <FieldScalar K>
struct EndoCandidate {
  CurvePtr<K> curve;
  BundleDescriptor bundle;
  int degree = 1;
  FormalScalar<K> beta;
  std::vector<FormalScalar<K>> gammas;
  std::vector<HomogPoly<Laurent<K>>> F;
  std::vector<HomogPoly<Laurent<K>>> G;
};

enum class CommonZeroStatus { proved_none, found, unknown };

std::string to_string(CommonZeroStatus s);

struct CommonZeroReport {
  CommonZeroStatus status = CommonZeroStatus::unknown;
  std::vector<std::string> point;  // projective coordinates when found
  std::string fibre;               // base point of a sampled hit
  std::string method;
  bool last_point_common_zero = false;
  std::uint64_t seed = 0;
  int samples = 0;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int samples = 64;
  bool strict = false;  // require proved-none instead of accepting unknown
};

struct VerifyReport {
  std::vector<bool> compat_ok;
  std::vector<bool> regular_ok;
  CommonZeroReport common_zero;
  int fibre_degree_echo = 0;
  bool degree_ok = false;
  bool passed = false;
  std::vector<std::string> notes;
};

namespace detail {

inline std::optional<Fp> reduce_mod(const Q& a, const FpField& f) {
  Fp den = f.from_mpz(a.value().get_den());
  if (den.is_zero()) return std::nullopt;
  return f.from_mpz(a.value().get_num()) / den;
}

inline std::optional<Fp> reduce_mod(const Fp& a, const FpField& f) {
  if (a.modulus() != 0 && a.modulus() != f.p()) throw std::invalid_argument("prime mismatch in specialization");
  return Fp(a.value(), f.p());
}

template <FieldScalar K>
std::optional<Fp> eval_poly_mod(const Poly<K>& p, const FpField& f, const Fp& x0) {
  Fp acc = f.from_int(0);
  for (int i = p.degree(); i >= 0; --i) {
    auto c = reduce_mod(p.coeff(i), f);
    if (!c) return std::nullopt;
    acc = acc * x0 + *c;
  }
  return acc;
}

template <FieldScalar K>
std::optional<Fp> eval_mod(const Laurent<K>& h, const FpField& f, const Fp& x0, const Fp& y0) {
  auto a = eval_poly_mod(h.a(), f, x0);
  auto b = eval_poly_mod(h.b(), f, x0);
  if (!a || !b) return std::nullopt;
  Fp den = f.from_int(1);
  for (int i = 0; i < h.y_power(); ++i) den = den * y0;
  return (*a + *b * y0) / den;
}

inline Fp pow_mod(Fp a, std::uint64_t e) {
  Fp r = a.one_like();
  while (e) {
    if (e & 1) r = r * a;
    a = a * a;
    e >>= 1;
  }
  return r;
}

inline std::optional<Fp> sqrt_mod(const Fp& a, const FpField& f) {
  if (a.is_zero()) return a;
  std::uint32_t p = f.p();
  if (p % 4 == 3) {
    Fp r = pow_mod(a, (std::uint64_t(p) + 1) / 4);
    if (r * r == a) return r;
    return std::nullopt;
  }
  for (std::uint32_t s = 0; s < p; ++s) {
    Fp c = f.from_int(s);
    if (c * c == a) return c;
  }
  return std::nullopt;
}

}  // namespace detail

// beta * (Sym^d M)(F) split by the formal group element carried by each term.
template <FieldScalar K>
std::map<GroupElem, HomogPoly<Laurent<K>>> twisted_sym_action(const TransitionMatrix<K>& t,
                                                               const HomogPoly<Laurent<K>>& f) {
  TwistGroup grp = t.desc.group();
  auto s = sym_action(t.unipotent, f);
  std::map<GroupElem, HomogPoly<Laurent<K>>> out;
  for (const auto& [u, c] : s.terms()) {
    GroupElem g;
    for (int i = 0; i < f.num_vars(); ++i)
      if (u[i] != 0) g = grp.multiply(g, grp.power(t.block_scalar[t.desc.block_of_var(i)], u[i]));
    auto it = out.find(g);
    if (it == out.end()) it = out.emplace(g, HomogPoly<Laurent<K>>(f.num_vars(), f.degree(), f.zero())).first;
    it->second.add_term(u, c);
  }
  return out;
}

template <FieldScalar K>
CommonZeroReport check_no_common_zero(const std::vector<HomogPoly<Laurent<K>>>& polys, std::uint64_t seed = 0,
                                      int samples = 64) {
  if (polys.empty()) throw std::invalid_argument("check_no_common_zero needs at least one polynomial");
  int n = polys[0].num_vars(), d = polys[0].degree();
  for (const auto& p : polys)
    if (p.num_vars() != n || p.degree() != d) throw std::invalid_argument("polynomials differ in shape");
  CommonZeroReport rep;
  rep.seed = seed;
  auto coord_zero = [&](int j) {
    Exponent u(n, 0);
    u[j] = d;
    for (const auto& p : polys)
      if (!p.coeff(u).is_zero()) return false;
    return true;
  };
  auto coord_point = [&](int j) {
    std::vector<std::string> pt(n, "0");
    pt[j] = "1";
    return pt;
  };
  rep.last_point_common_zero = coord_zero(n - 1);
  for (int j = 0; j < n; ++j)
    if (coord_zero(j)) {
      rep.status = CommonZeroStatus::found;
      rep.point = coord_point(j);
      rep.method = "coordinate-point";
      return rep;
    }
  const auto& c = polys[0].zero().curve();
  if (n == 2 && polys.size() == 2) {
    // Sylvester matrix of the two binary forms in z = t1/t0 with formal degree d.
    Laurent<K> zero(c);
    int sz = 2 * d;
    Matrix<Laurent<K>> syl(sz, sz, zero);
    for (int k = 0; k < 2; ++k)
      for (int row = 0; row < d; ++row)
        for (int i = 0; i <= d; ++i) syl(k * d + row, row + i) = polys[k].coeff({d - i, i});
    Laurent<K> res = d == 0 ? zero.one_like() : determinant(syl);
    rep.method = "resultant";
    if (!res.is_zero()) {
      // A non-constant regular resultant has a zero somewhere on U, and the fibre there has a common root.
      if (as_scalar(res)) {
        rep.status = CommonZeroStatus::proved_none;
      } else if (is_regular_U(res)) {
        rep.status = CommonZeroStatus::found;
        rep.fibre = "zero of resultant " + res.to_string();
      } else {
        rep.status = CommonZeroStatus::unknown;
      }
    } else {
      rep.status = CommonZeroStatus::found;
      rep.point = {};
    }
    return rep;
  }
  // Random specialization of the base point and the fibre coordinates.
  FpField f = [&] {
    if constexpr (std::is_same_v<K, Fp>) return FpField(c->field.p());
    else return FpField(2147483647u);
  }();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, f.p() - 1);
  rep.method = "sampling";
  auto lam = detail::reduce_mod(c->lambda, f);
  for (int s = 0; s < samples && lam; ++s) {
    Fp x0 = f.from_int(dist(rng));
    Fp gx = x0 * (x0 - f.from_int(1)) * (x0 - *lam);
    auto y0 = detail::sqrt_mod(gx, f);
    if (!y0 || y0->is_zero()) continue;
    std::vector<Fp> pt;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      pt.push_back(f.from_int(dist(rng)));
      nonzero = nonzero || !pt.back().is_zero();
    }
    if (!nonzero) continue;
    ++rep.samples;
    bool all = true;
    for (const auto& p : polys) {
      Fp acc = f.from_int(0);
      bool ok = true;
      for (const auto& [u, coeff] : p.terms()) {
        auto v = detail::eval_mod(coeff, f, x0, *y0);
        if (!v) {
          ok = false;
          break;
        }
        Fp mono = *v;
        for (int i = 0; i < n; ++i) mono = mono * detail::pow_mod(pt[i], u[i]);
        acc = acc + mono;
      }
      if (!ok || !acc.is_zero()) {
        all = false;
        break;
      }
    }
    if (all) {
      rep.status = CommonZeroStatus::found;
      for (const auto& v : pt) rep.point.push_back(v.to_string());
      rep.fibre = "(" + x0.to_string() + "," + y0->to_string() + ") mod " + std::to_string(f.p());
      return rep;
    }
  }
  rep.status = CommonZeroStatus::unknown;
  return rep;
}

template <FieldScalar K>
VerifyReport check_compatibility(const EndoCandidate<K>& c, const VerifyOptions& opt = {}) {
  const auto& desc = c.bundle;
  desc.validate();
  int n = desc.total_rank();
  if (static_cast<int>(c.F.size()) != n || static_cast<int>(c.G.size()) != n)
    throw std::invalid_argument("F and G must have one polynomial per bundle rank");
  if (c.gammas.size() != desc.summands.size()) throw std::invalid_argument("one gamma per summand is required");
  if (c.degree < 1) throw std::invalid_argument("fibre degree must be positive");
  for (const auto* list : {&c.F, &c.G})
    for (const auto& p : *list)
      if (p.num_vars() != n || p.degree() != c.degree)
        throw std::invalid_argument("polynomial degree or variable count does not match the candidate");
  TwistGroup grp = desc.group();
  auto t = transition_matrix(desc, c.curve);
  Laurent<K> w = omega(c.curve);
  VerifyReport rep;
  rep.fibre_degree_echo = c.degree;
  rep.degree_ok = true;
  GroupElem beta_g = grp.reduce(c.beta.twist);
  for (int s = 0; s < n; ++s) {
    bool reg = true;
    for (const auto& [u, a] : c.F[s].terms()) reg = reg && is_regular_U(a);
    for (const auto& [u, a] : c.G[s].terms()) reg = reg && is_regular_V(a);
    rep.regular_ok.push_back(reg);

    int b = desc.block_of_var(s);
    bool first = s == desc.block_offset(b);
    std::map<GroupElem, HomogPoly<Laurent<K>>> lhs;
    for (auto& [g, p] : twisted_sym_action(t, c.F[s])) {
      auto q = p.scaled(c.beta.value);
      if (!q.is_zero()) lhs.emplace(grp.multiply(beta_g, g), std::move(q));
    }
    auto rhs_poly = first ? c.G[s] : c.G[s] + c.G[s - 1].scaled(w);
    rhs_poly = rhs_poly.scaled(c.gammas[b].value);
    std::map<GroupElem, HomogPoly<Laurent<K>>> rhs;
    if (!rhs_poly.is_zero()) rhs.emplace(grp.reduce(c.gammas[b].twist), rhs_poly);
    rep.compat_ok.push_back(lhs == rhs);
  }
  rep.common_zero = check_no_common_zero(c.F, opt.seed, opt.samples);
  bool ok = rep.degree_ok;
  for (bool x : rep.compat_ok) ok = ok && x;
  for (bool x : rep.regular_ok) ok = ok && x;
  if (rep.common_zero.status == CommonZeroStatus::found) ok = false;
  if (opt.strict && rep.common_zero.status != CommonZeroStatus::proved_none) ok = false;
  rep.passed = ok;
  return rep;
}

// h = u_part + omega_coeff * omega + v_part with u_part in O(U) and v_part in O(V).
template <FieldScalar K>
struct ChartSplit {
  Laurent<K> u_part;
  K omega_coeff;
  Laurent<K> v_part;
};

template <FieldScalar K>
ChartSplit<K> split_charts(const Laurent<K>& h) {
  using P = Poly<K>;
  const auto& c = h.curve();
  const auto& f = c->field;
  ChartSplit<K> out{Laurent<K>(c), f.from_int(0), h};
  Laurent<K> w = omega(c);
  while (!out.v_part.is_zero() && val_at_O(out.v_part) < 0) {
    const auto& e = out.v_part;
    int pa = e.a().is_zero() ? -1 : 2 * e.a().degree();
    int pb = e.b().is_zero() ? -1 : 2 * e.b().degree() + 3;
    K lc = pa > pb ? e.a().lead() : e.b().lead();
    int pole = std::max(pa, pb) - 3 * e.y_power();
    if (pole == 1) {
      out.omega_coeff = out.omega_coeff + lc;
      out.v_part = e - w.scaled(lc);
      continue;
    }
    Laurent<K> basis = pole % 2 == 0 ? Laurent<K>::from_poly(c, P::monomial(f, lc, pole / 2))
                                     : Laurent<K>::from_parts(c, P(f), P::monomial(f, lc, (pole - 3) / 2), 0);
    out.u_part = out.u_part + basis;
    out.v_part = e - basis;
  }
  return out;
}

template <FieldScalar K>
EndoCandidate<K> identity_endo(const BundleDescriptor& desc, const CurvePtr<K>& c) {
  desc.validate();
  int n = desc.total_rank();
  Laurent<K> one = Laurent<K>::integer(c, 1);
  EndoCandidate<K> e{c, desc, 1, {one, {}}, {}, {}, {}};
  for (int b = 0; b < static_cast<int>(desc.summands.size()); ++b) {
    GroupElem g;
    if (!desc.symbol(b).empty()) g[desc.symbol(b)] = 1;
    e.gammas.push_back({one, g});
  }
  for (int i = 0; i < n; ++i) {
    e.F.push_back(HomogPoly<Laurent<K>>::variable(n, i, one));
    e.G.push_back(e.F.back());
  }
  return e;
}

// O + torsion lines (order 1 means trivial), F_i = G_i = t_i^k.
template <FieldScalar K>
EndoCandidate<K> torsion_power_endo(const std::vector<int>& orders, int k, const CurvePtr<K>& c) {
  if (orders.empty() || k < 1) throw std::invalid_argument("torsion_power_endo needs orders and k >= 1");
  BundleDescriptor desc;
  for (int o : orders) {
    if (o < 1 || k % o != 0) throw std::invalid_argument("k must be a multiple of every torsion order");
    Summand s;
    if (o >= 2) s.twist = {Twist::Kind::torsion, o, ""};
    desc.summands.push_back(s);
  }
  int n = desc.total_rank();
  Laurent<K> one = Laurent<K>::integer(c, 1);
  EndoCandidate<K> e{c, desc, k, {one, {}}, std::vector<FormalScalar<K>>(n, {one, {}}), {}, {}};
  for (int i = 0; i < n; ++i) {
    Exponent u(n, 0);
    u[i] = k;
    e.F.push_back(HomogPoly<Laurent<K>>::monomial(u, one));
    e.G.push_back(e.F.back());
  }
  return e;
}

// Rank-2 Atiyah bundle over F_p; multiplier must be a power of p.
EndoCandidate<Fp> char_p_atiyah_endo(std::uint32_t p, long lambda, long multiplier);

}  // namespace pbundle
