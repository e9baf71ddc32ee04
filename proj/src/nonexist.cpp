#include "pbundle/nonexist.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pbundle {

using json = nlohmann::json;

std::string to_string(Status s) {
  switch (s) {
    case Status::unknown: return "unknown";
    case Status::scalar: return "scalar";
    case Status::zero: return "zero";
  }
  return "unknown";
}

static Status status_from_string(const std::string& s) {
  if (s == "unknown") return Status::unknown;
  if (s == "scalar") return Status::scalar;
  if (s == "zero") return Status::zero;
  throw std::invalid_argument("bad status '" + s + "'");
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::nonexistent: return "nonexistent";
    case Verdict::Kind::not_excluded: return "not-excluded";
    case Verdict::Kind::undetermined: return "undetermined";
  }
  return "undetermined";
}

int ConstraintSystem::var(int poly, const Exponent& u) const {
  auto it = std::lower_bound(monos.begin(), monos.end(), u);
  if (poly < 0 || poly >= num_polys() || it == monos.end() || *it != u)
    throw std::invalid_argument("no coefficient " + exponent_to_string(u) + " in polynomial " + std::to_string(poly));
  return poly * static_cast<int>(monos.size()) + static_cast<int>(it - monos.begin());
}

Var ConstraintSystem::var_info(int v) const {
  int nm = static_cast<int>(monos.size());
  return {v / nm, monos[v % nm]};
}

ConstraintSystem build_system(SystemKind kind, int r, int d) {
  if (r < 1) throw std::invalid_argument("rank parameter r must be at least 1");
  if (d < 0) throw std::invalid_argument("degree must be non-negative");
  ConstraintSystem sys{kind, r, d, monomials(r + 1, d), {}};
  std::sort(sys.monos.begin(), sys.monos.end());
  int nm = static_cast<int>(sys.monos.size());
  // expansion[u] = [(v, coefficient)] from whichcoeffs
  std::vector<std::vector<std::pair<int, OmegaCoeff>>> exp(nm);
  for (int a = 0; a < nm; ++a)
    for (int b = 0; b < nm; ++b)
      if (auto w = whichcoeffs(sys.monos[a], sys.monos[b])) exp[a].emplace_back(b, *w);
  for (int i = 0; i < sys.num_polys(); ++i)
    for (int a = 0; a < nm; ++a) {
      Constraint c{i * nm + a, {}};
      for (int j = 0; j <= i; ++j)
        for (const auto& [b, w] : exp[a]) {
          if (j == i && b == a) continue;
          mpz_class m = ((i - j) % 2 == 0) ? w.coeff : mpz_class(-w.coeff);
          c.terms.push_back({j * nm + b, m, w.power + i - j});
        }
      sys.cons.push_back(std::move(c));
    }
  return sys;
}

std::vector<Var> VanishingCertificate::zeros() const {
  std::vector<Var> z;
  for (const auto& s : steps)
    if (s.rule == kZeroRule || s.rule == kEliminationRule) z.push_back(s.affected);
  return z;
}

std::vector<Exponent> vanishing_family(int r, int d) {
  std::vector<Exponent> out;
  for (int i = r; i >= 0; --i)
    for (int k = 0; k <= d - 2; ++k) {
      Exponent u(r + 1, 0);
      u[r - 1] += k;
      u[r] += d - k - 1;
      u[i] += 1;
      if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
    }
  return out;
}

namespace {

bool mult_vanishes(const mpz_class& m, unsigned long p) {
  if (p == 0) return m == 0;
  return mpz_divisible_ui_p(m.get_mpz_t(), p) != 0;
}

// Field used for linear relations among scalar coefficients.
template <class F>
struct RelField;

template <>
struct RelField<Q> {
  unsigned long p;
  Q from(const mpz_class& m) const { return Q(mpq_class(m)); }
  std::string str(const Q& q) const { return q.to_string(); }
  Q parse(const std::string& s) const { return QField().parse(s); }
};

template <>
struct RelField<Fp> {
  unsigned long p;
  Fp from(const mpz_class& m) const { return FpField(static_cast<std::uint32_t>(p)).from_mpz(m); }
  std::string str(const Fp& q) const { return q.to_string(); }
  Fp parse(const std::string& s) const { return FpField(static_cast<std::uint32_t>(p)).parse(s); }
};

template <class F>
struct Row {
  std::map<int, F> coef;
  std::map<int, F> comb;  // relation step index -> multiplier
};

template <class F>
void axpy(std::map<int, F>& dst, const F& a, const std::map<int, F>& src) {
  for (const auto& [k, v] : src) {
    auto it = dst.find(k);
    if (it == dst.end()) {
      F t = a * v;
      if (!t.is_zero()) dst.emplace(k, t);
    } else {
      it->second = it->second + a * v;
      if (it->second.is_zero()) dst.erase(it);
    }
  }
}

class Engine {
 public:
  Engine(const ConstraintSystem& sys, VanishingCertificate& cert)
      : sys_(sys), cert_(cert), st_(sys.cons.size(), Status::unknown) {}

  Status status(int v) const { return st_[v]; }
  bool vanishes(const SysTerm& t) const { return st_[t.var] == Status::zero || mult_vanishes(t.mult, cert_.p); }

  std::vector<JustTerm> justify(int c) const {
    const auto& con = sys_.cons[c];
    std::vector<JustTerm> j{{sys_.var_info(con.own), "1", 0, st_[con.own]}};
    for (const auto& t : con.terms) j.push_back({sys_.var_info(t.var), t.mult.get_str(), t.power, st_[t.var]});
    return j;
  }

  bool high_vanish(int c) const {
    for (const auto& t : sys_.cons[c].terms)
      if (t.power >= 2 && !vanishes(t)) return false;
    return true;
  }
  std::vector<const SysTerm*> live_ones(int c) const {
    std::vector<const SysTerm*> out;
    for (const auto& t : sys_.cons[c].terms)
      if (t.power == 1 && !vanishes(t)) out.push_back(&t);
    return out;
  }

  void record(const char* rule, int c, int affected) {
    cert_.steps.push_back({rule, sys_.var_info(c), sys_.var_info(affected), justify(c), {}});
  }

  bool try_zero(int c) {
    if (!high_vanish(c)) return false;
    auto ones = live_ones(c);
    if (ones.size() != 1 || st_[ones[0]->var] != Status::scalar) return false;
    record(kZeroRule, c, ones[0]->var);
    st_[ones[0]->var] = Status::zero;
    return true;
  }

  bool try_scalar(int c) {
    int own = sys_.cons[c].own;
    if (st_[own] != Status::unknown || !high_vanish(c) || !live_ones(c).empty()) return false;
    record(kScalarRule, c, own);
    st_[own] = Status::scalar;
    return true;
  }

  bool examine(int c) {
    bool a = try_zero(c);
    bool b = try_scalar(c);
    return a || b;
  }

  bool try_relation(int c) {
    if (!high_vanish(c)) return false;
    auto ones = live_ones(c);
    if (ones.size() < 2) return false;
    std::string key;
    for (const auto* t : ones) {
      if (st_[t->var] != Status::scalar) return false;
      key += std::to_string(t->var) + ":" + t->mult.get_str() + ";";
    }
    if (!seen_.insert(key).second) return false;
    int own = sys_.cons[c].own;
    record(kRelationRule, c, own);
    relations_.push_back(static_cast<int>(cert_.steps.size()) - 1);
    if (st_[own] == Status::unknown) st_[own] = Status::scalar;
    return true;
  }

  template <class F>
  bool eliminate(const RelField<F>& fld) {
    std::map<int, Row<F>> piv;
    for (int s : relations_) {
      Row<F> row;
      for (const auto& jt : cert_.steps[s].justification) {
        if (jt.power != 1 || jt.status != Status::scalar) continue;
        int v = sys_.var(jt.var.poly, jt.var.exp);
        if (st_[v] == Status::zero) continue;
        F m = fld.from(mpz_class(jt.mult));
        if (!m.is_zero()) row.coef.emplace(v, m);
      }
      row.comb.emplace(s, fld.from(1));
      for (bool again = true; again;) {
        again = false;
        for (const auto& [v, a] : row.coef) {
          auto it = piv.find(v);
          if (it == piv.end()) continue;
          F f = -a;
          axpy(row.coef, f, it->second.coef);
          axpy(row.comb, f, it->second.comb);
          again = true;
          break;
        }
      }
      if (row.coef.empty()) continue;
      int pv = row.coef.begin()->first;
      F inv = row.coef.begin()->second.inverse();
      for (auto& [k, v] : row.coef) v = v * inv;
      for (auto& [k, v] : row.comb) v = v * inv;
      for (auto& [q, other] : piv) {
        auto it = other.coef.find(pv);
        if (it == other.coef.end()) continue;
        F f = -it->second;
        axpy(other.coef, f, row.coef);
        axpy(other.comb, f, row.comb);
      }
      piv.emplace(pv, std::move(row));
    }
    bool progress = false;
    for (const auto& [pv, row] : piv) {
      if (row.coef.size() != 1 || st_[pv] == Status::zero) continue;
      Step s{kEliminationRule, sys_.var_info(pv), sys_.var_info(pv), {}, {}};
      for (const auto& [idx, m] : row.comb) s.combination.emplace_back(idx, fld.str(m));
      cert_.steps.push_back(std::move(s));
      st_[pv] = Status::zero;
      progress = true;
    }
    return progress;
  }

  void fixpoint_single() {
    for (bool progress = true; progress;) {
      progress = false;
      for (int c = 0; c < static_cast<int>(sys_.cons.size()); ++c) progress = examine(c) || progress;
    }
  }

  void fixpoint_frontier() {
    for (bool progress = true; progress;) {
      progress = false;
      for (int c = 0; c < static_cast<int>(sys_.cons.size()); ++c) {
        progress = examine(c) || progress;
        progress = try_relation(c) || progress;
      }
      bool elim = cert_.p == 0 ? eliminate(RelField<Q>{0}) : eliminate(RelField<Fp>{cert_.p});
      progress = elim || progress;
    }
  }

 private:
  const ConstraintSystem& sys_;
  VanishingCertificate& cert_;
  std::vector<Status> st_;
  std::vector<int> relations_;
  std::set<std::string> seen_;
};

void check_params(int r, int d, unsigned long p) {
  if (r < 1) throw std::invalid_argument("rank parameter r must be at least 1");
  if (d < 2) throw std::invalid_argument("the cascade needs degree d >= 2");
  if (p != 0 && (p < 5 || !is_prime(p))) throw std::invalid_argument("characteristic must be 0 or a prime >= 5");
}

}  // namespace

VanishingCertificate run_cascade(int r, int d, unsigned long p, CascadeMode mode) {
  check_params(r, d, p);
  auto sys = build_system(SystemKind::cascade, r, d);
  VanishingCertificate cert{SystemKind::cascade, r, d, p, mode == CascadeMode::scheduled ? "scheduled" : "frontier", {}};
  Engine eng(sys, cert);
  if (mode == CascadeMode::frontier) {
    eng.fixpoint_frontier();
    return cert;
  }
  // Double induction: k upward inside each i, i from r down to 0.
  for (int i = r; i >= 0; --i)
    for (int k = 0; k <= d - 2; ++k) {
      Exponent u(r + 1, 0);
      u[r - 1] += k;
      u[r] += d - k - 1;
      u[i] += 1;
      int vu = sys.var(0, u);
      if (eng.status(vu) == Status::zero) continue;
      if (eng.status(vu) == Status::unknown) eng.examine(vu);
      Exponent up = u;
      up[r - 1] += 1;
      up[r] -= 1;
      if (up[r] < 0) continue;
      eng.examine(sys.var(0, up));
    }
  return cert;
}

namespace {

template <class F>
bool replay_elimination(const ConstraintSystem& sys, const VanishingCertificate& cert, const Step& s, std::size_t idx,
                        const std::vector<Status>& st, std::string& err) {
  RelField<F> fld{cert.p};
  std::map<int, F> total;
  for (const auto& [ri, ms] : s.combination) {
    if (ri < 0 || static_cast<std::size_t>(ri) >= idx || cert.steps[ri].rule != kRelationRule) {
      err = "combination refers to a step that is not an earlier relation";
      return false;
    }
    F m = fld.parse(ms);
    std::map<int, F> row;
    for (const auto& jt : cert.steps[ri].justification) {
      if (jt.power != 1 || jt.status != Status::scalar) continue;
      int v = sys.var(jt.var.poly, jt.var.exp);
      if (st[v] == Status::zero) continue;
      F c = fld.from(mpz_class(jt.mult));
      if (!c.is_zero()) row.emplace(v, c);
    }
    axpy(total, m, row);
  }
  int target = sys.var(s.affected.poly, s.affected.exp);
  if (total.size() != 1 || total.begin()->first != target) {
    err = "combination does not isolate the affected coefficient";
    return false;
  }
  return true;
}

}  // namespace

ReplayResult replay(const VanishingCertificate& cert) {
  ReplayResult res;
  try {
    check_params(cert.r, cert.d, cert.p);
    auto sys = build_system(cert.system, cert.r, cert.d);
    VanishingCertificate scratch{cert.system, cert.r, cert.d, cert.p, cert.mode, {}};
    Engine eng(sys, scratch);
    std::vector<Status> st(sys.cons.size(), Status::unknown);
    auto vanishes = [&](const SysTerm& t) { return st[t.var] == Status::zero || mult_vanishes(t.mult, cert.p); };
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
      const Step& s = cert.steps[i];
      auto fail = [&](const std::string& why) {
        res.error = "step " + std::to_string(i) + " (" + s.rule + "): " + why;
        return res;
      };
      int c = sys.var(s.examined.poly, s.examined.exp);
      int aff = sys.var(s.affected.poly, s.affected.exp);
      if (s.rule == kEliminationRule) {
        if (!s.justification.empty() || aff != c) return fail("malformed elimination step");
        if (st[aff] == Status::zero) return fail("coefficient already zero");
        std::string err;
        bool ok = cert.p == 0 ? replay_elimination<Q>(sys, cert, s, i, st, err)
                              : replay_elimination<Fp>(sys, cert, s, i, st, err);
        if (!ok) return fail(err);
        st[aff] = Status::zero;
        res.zeros.push_back(s.affected);
        continue;
      }
      // Recompute the omega-expansion with the statuses at this point.
      const auto& con = sys.cons[c];
      std::vector<JustTerm> j{{sys.var_info(con.own), "1", 0, st[con.own]}};
      for (const auto& t : con.terms) j.push_back({sys.var_info(t.var), t.mult.get_str(), t.power, st[t.var]});
      if (j != s.justification) return fail("justification does not match the omega-expansion");
      bool high = true;
      std::vector<const SysTerm*> ones;
      for (const auto& t : con.terms) {
        if (t.power >= 2 && !vanishes(t)) high = false;
        if (t.power == 1 && !vanishes(t)) ones.push_back(&t);
      }
      if (!high) return fail("a higher omega power survives");
      if (s.rule == kScalarRule) {
        if (aff != c || st[c] != Status::unknown || !ones.empty()) return fail("intersection rule does not apply");
        st[c] = Status::scalar;
      } else if (s.rule == kZeroRule) {
        if (ones.size() != 1 || ones[0]->var != aff || st[aff] != Status::scalar)
          return fail("rigidity rule does not apply");
        st[aff] = Status::zero;
        res.zeros.push_back(s.affected);
      } else if (s.rule == kRelationRule) {
        if (aff != c || ones.size() < 2) return fail("relation rule does not apply");
        for (const auto* t : ones)
          if (st[t->var] != Status::scalar) return fail("relation uses a non-scalar coefficient");
        if (st[c] == Status::unknown) st[c] = Status::scalar;
      } else {
        return fail("unknown rule");
      }
    }
    res.ok = true;
  } catch (const std::exception& e) {
    res.ok = false;
    res.error = e.what();
  }
  return res;
}

CommonZeroProof conclude_common_zero(int r, int d, unsigned long p) {
  check_params(r, d, p);
  auto sys = build_system(SystemKind::chain, r, d);
  Exponent top(r + 1, 0);
  top[r] = d;
  auto done = [&](const VanishingCertificate& cert) {
    auto z = cert.zeros();
    for (int i = 0; i <= r; ++i)
      if (std::find(z.begin(), z.end(), Var{i, top}) == z.end()) return false;
    return true;
  };
  CommonZeroProof proof{r, d, p, false, "scheduled", {SystemKind::chain, r, d, p, "scheduled", {}}, {}};
  {
    Engine eng(sys, proof.cert);
    eng.fixpoint_single();
  }
  if (!done(proof.cert)) {
    proof.mode = "frontier";
    proof.cert = {SystemKind::chain, r, d, p, "frontier", {}};
    Engine eng(sys, proof.cert);
    eng.fixpoint_frontier();
  }
  proof.established = done(proof.cert);
  proof.point = Exponent(r + 1, 0);
  proof.point[r] = 1;
  return proof;
}

Verdict nonexistence_verdict(const BundleDescriptor& desc, int d, unsigned long p) {
  desc.validate();
  if (d < 1) throw std::invalid_argument("fibre degree must be positive");
  Verdict v;
  int best = 0;
  for (int b = 1; b < static_cast<int>(desc.summands.size()); ++b)
    if (desc.summands[b].rank > desc.summands[best].rank) best = b;
  v.block = best;
  if (d == 1) {
    v.kind = Verdict::Kind::not_excluded;
    v.reason = "fibre degree 1: the identity-type candidate exists";
    return v;
  }
  if (desc.summands[best].rank == 1) {
    v.kind = Verdict::Kind::not_excluded;
    v.reason = "split bundle: every summand is a line bundle";
    return v;
  }
  v.normalization = desc.summands[best].twist.kind == Twist::Kind::trivial
                        ? "none: block " + std::to_string(best) + " is untwisted"
                        : "twist the bundle by the inverse of block " + std::to_string(best) + "'s line bundle";
  v.normalization += "; t_j = 0 outside block " + std::to_string(best) +
                     "; summands whose gamma differs from beta have identically zero reduced F";
  v.proof = conclude_common_zero(desc.summands[best].rank - 1, d, p);
  if (v.proof->established) {
    v.kind = Verdict::Kind::nonexistent;
    int last = desc.block_offset(best) + desc.summands[best].rank - 1;
    v.reason = "every F_j vanishes at the basis point t_" + std::to_string(last) +
               " = 1 (others 0), so no surjective endomorphism of fibre degree " + std::to_string(d) + " exists";
  } else {
    v.kind = Verdict::Kind::undetermined;
    v.reason = "deduction blocked: the coupled cascade does not force [t_r^d]F_i = 0 for all i";
    if (p != 0) v.reason += " (binomial multipliers vanish mod " + std::to_string(p) + ")";
  }
  return v;
}

namespace {

json var_json(const Var& v) { return {{"poly", v.poly}, {"exp", v.exp}}; }
Var var_from(const json& j) { return {j.at("poly").get<int>(), j.at("exp").get<Exponent>()}; }

}  // namespace

std::string certificate_to_jsonl(const VanishingCertificate& cert) {
  std::ostringstream out;
  json h = {{"kind", "header"},
            {"system", cert.system == SystemKind::cascade ? "cascade" : "chain"},
            {"r", cert.r},
            {"d", cert.d},
            {"mode", cert.mode}};
  h["field"] = cert.p == 0 ? json("Q") : json{{"Fp", cert.p}};
  out << h.dump() << "\n";
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& s = cert.steps[i];
    json j = {{"kind", "step"}, {"index", i}, {"rule", s.rule}, {"examined", var_json(s.examined)},
              {"affected", var_json(s.affected)}};
    json just = json::array();
    for (const auto& t : s.justification)
      just.push_back({{"poly", t.var.poly}, {"exp", t.var.exp}, {"mult", t.mult}, {"omega", t.power},
                      {"status", to_string(t.status)}});
    j["justification"] = just;
    if (!s.combination.empty()) {
      json comb = json::array();
      for (const auto& [k, m] : s.combination) comb.push_back({k, m});
      j["combination"] = comb;
    }
    out << j.dump() << "\n";
  }
  json zs = json::array();
  for (const auto& z : cert.zeros()) zs.push_back(var_json(z));
  out << json{{"kind", "summary"}, {"steps", cert.steps.size()}, {"zeros", zs}}.dump() << "\n";
  return out.str();
}

std::vector<VanishingCertificate> certificates_from_jsonl(const std::string& text) {
  std::vector<VanishingCertificate> out;
  std::vector<bool> summarized;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "header") {
      VanishingCertificate c;
      std::string sys = j.at("system").get<std::string>();
      if (sys != "cascade" && sys != "chain") throw std::invalid_argument("unknown system '" + sys + "'");
      c.system = sys == "cascade" ? SystemKind::cascade : SystemKind::chain;
      c.r = j.at("r").get<int>();
      c.d = j.at("d").get<int>();
      c.mode = j.at("mode").get<std::string>();
      const auto& f = j.at("field");
      c.p = f.is_string() ? (f.get<std::string>() == "Q" ? 0 : throw std::invalid_argument("bad field tag"))
                          : f.at("Fp").get<unsigned long>();
      out.push_back(std::move(c));
      summarized.push_back(false);
      continue;
    }
    if (out.empty()) throw std::invalid_argument("certificate line before any header");
    auto& c = out.back();
    if (kind == "step") {
      if (j.at("index").get<std::size_t>() != c.steps.size()) throw std::invalid_argument("step index out of order");
      Step s{j.at("rule").get<std::string>(), var_from(j.at("examined")), var_from(j.at("affected")), {}, {}};
      for (const auto& t : j.at("justification"))
        s.justification.push_back({{t.at("poly").get<int>(), t.at("exp").get<Exponent>()},
                                   t.at("mult").get<std::string>(), t.at("omega").get<int>(),
                                   status_from_string(t.at("status").get<std::string>())});
      if (j.contains("combination"))
        for (const auto& p : j.at("combination")) s.combination.emplace_back(p.at(0).get<int>(), p.at(1).get<std::string>());
      c.steps.push_back(std::move(s));
    } else if (kind == "summary") {
      std::vector<Var> claimed;
      for (const auto& z : j.at("zeros")) claimed.push_back(var_from(z));
      if (claimed != c.zeros() || j.at("steps").get<std::size_t>() != c.steps.size())
        throw std::invalid_argument("summary does not match the recorded steps");
      summarized.back() = true;
    } else {
      throw std::invalid_argument("unknown line kind '" + kind + "'");
    }
  }
  for (bool s : summarized)
    if (!s) throw std::invalid_argument("certificate without summary line");
  return out;
}

}  // namespace pbundle
