#include "pbundle/io.hpp"

#include <stdexcept>

namespace pbundle {

unsigned long field_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "Q") throw std::invalid_argument("field must be \"Q\" or {\"Fp\": p}");
    return 0;
  }
  if (!j.is_object() || !j.contains("Fp")) throw std::invalid_argument("field must be \"Q\" or {\"Fp\": p}");
  const auto& p = j.at("Fp");
  unsigned long v = p.is_string() ? std::stoul(p.get<std::string>()) : p.get<unsigned long>();
  if (v < 5 || !is_prime(v)) throw std::invalid_argument("Fp needs a prime p >= 5");
  return v;
}

json field_to_json(unsigned long p) { return p == 0 ? json("Q") : json{{"Fp", p}}; }

BundleDescriptor descriptor_from_json(const json& j) {
  BundleDescriptor d;
  for (const auto& s : j.at("summands")) {
    Summand sm;
    sm.rank = s.at("rank").get<int>();
    const auto& t = s.contains("twist") ? s.at("twist") : json("trivial");
    if (t.is_string()) {
      if (t.get<std::string>() != "trivial") throw std::invalid_argument("unknown twist '" + t.get<std::string>() + "'");
    } else if (t.contains("torsion")) {
      sm.twist = {Twist::Kind::torsion, t.at("torsion").get<int>(), ""};
    } else if (t.contains("nontorsion")) {
      sm.twist = {Twist::Kind::nontorsion, 0, t.at("nontorsion").get<std::string>()};
    } else {
      throw std::invalid_argument("twist must be \"trivial\", {\"torsion\": k} or {\"nontorsion\": label}");
    }
    d.summands.push_back(sm);
  }
  d.validate();
  return d;
}

json to_json(const BundleDescriptor& d) {
  json arr = json::array();
  for (const auto& s : d.summands) {
    json t;
    switch (s.twist.kind) {
      case Twist::Kind::trivial: t = "trivial"; break;
      case Twist::Kind::torsion: t = {{"torsion", s.twist.order}}; break;
      case Twist::Kind::nontorsion: t = {{"nontorsion", s.twist.label}}; break;
    }
    arr.push_back({{"rank", s.rank}, {"twist", t}});
  }
  return {{"summands", arr}};
}

namespace {

template <FieldScalar K>
FormalScalar<K> formal_from_json(const CurvePtr<K>& c, const json& j) {
  if (j.is_string()) return {parse_laurent(c, j.get<std::string>()), {}};
  FormalScalar<K> s{parse_laurent(c, j.at("value").get<std::string>()), {}};
  if (j.contains("twist"))
    for (const auto& [k, e] : j.at("twist").items()) s.twist[k] = e.template get<long>();
  return s;
}

template <FieldScalar K>
EndoCandidate<K> build_candidate(const CurvePtr<K>& c, const json& j) {
  Laurent<K> one = Laurent<K>::integer(c, 1);
  EndoCandidate<K> e{c, descriptor_from_json(j.at("bundle")), 1, {one, {}}, {}, {}, {}};
  const auto& deg = j.at("degree");
  e.degree = deg.is_string() ? std::stoi(deg.get<std::string>()) : deg.get<int>();
  if (e.degree < 1) throw std::invalid_argument("degree must be positive");
  int n = e.bundle.total_rank();
  e.beta = formal_from_json(c, j.at("beta"));
  for (const auto& g : j.at("gammas")) e.gammas.push_back(formal_from_json(c, g));
  for (const auto& f : j.at("F")) e.F.push_back(parse_homog(c, f.get<std::string>(), n, e.degree));
  for (const auto& g : j.at("G")) e.G.push_back(parse_homog(c, g.get<std::string>(), n, e.degree));
  return e;
}

}  // namespace

AnyCandidate candidate_from_json(const json& j) {
  for (const char* key : {"curve", "bundle", "degree", "beta", "gammas", "F", "G"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("candidate is missing key '") + key + "'");
  const auto& cj = j.at("curve");
  unsigned long p = field_from_json(cj.at("field"));
  std::string lam = cj.at("lambda").is_string() ? cj.at("lambda").get<std::string>() : cj.at("lambda").dump();
  if (p == 0) {
    QField f;
    return build_candidate(make_curve(f, f.parse(lam)), j);
  }
  FpField f(static_cast<std::uint32_t>(p));
  return build_candidate(make_curve(f, f.parse(lam)), j);
}

json to_json(const CommonZeroReport& r) {
  json j = {{"status", to_string(r.status)},
            {"method", r.method},
            {"last_point_common_zero", r.last_point_common_zero},
            {"seed", std::to_string(r.seed)},
            {"samples", r.samples}};
  if (!r.point.empty()) j["point"] = r.point;
  if (!r.fibre.empty()) j["fibre"] = r.fibre;
  return j;
}

json to_json(const VerifyReport& r) {
  json j = {{"passed", r.passed},
            {"fibre_degree", r.fibre_degree_echo},
            {"degree_ok", r.degree_ok},
            {"compatibility", r.compat_ok},
            {"regularity", r.regular_ok},
            {"common_zero", to_json(r.common_zero)}};
  j["notes"] = r.notes;
  return j;
}

json to_json(const Verdict& v) {
  json j = {{"verdict", to_string(v.kind)}, {"reason", v.reason}, {"block", v.block}};
  if (!v.normalization.empty()) j["normalization"] = v.normalization;
  if (v.proof) {
    j["proof"] = {{"r", v.proof->r},
                  {"d", v.proof->d},
                  {"field", field_to_json(v.proof->p)},
                  {"established", v.proof->established},
                  {"mode", v.proof->mode},
                  {"steps", v.proof->cert.steps.size()},
                  {"common_zero", exponent_to_string(v.proof->point)}};
  }
  return j;
}

json to_json(const RatInterval& r) {
  json j = {{"lo", r.lo.get_str()}, {"hi", r.hi.get_str()}, {"exact", r.exact()}};
  j["approx"] = std::to_string(r.midpoint());
  return j;
}

json to_json(const DegreeBoundVerdict& v) {
  json j = {{"confirmed", v.confirmed}, {"spectral_radius", to_json(v.rho)}, {"tir_consistent", v.tir_consistent},
            {"reason", v.reason}};
  if (v.sqrt_lambda1) j["sqrt_lambda1_g"] = to_json(*v.sqrt_lambda1);
  json chains = json::array();
  for (const auto& c : v.chains)
    chains.push_back({{"sequence", c.sequence},
                      {"j", c.j},
                      {"ell", c.ell},
                      {"annihilator", c.annihilator.to_string()},
                      {"degenerate", c.annihilator.degenerate},
                      {"divides_charpoly", c.divides_charpoly}});
  j["relation_chains"] = chains;
  return j;
}

json to_json(const DynReport& r) {
  return {{"fibre_degree", r.fibre_degree},
          {"lambda1_g", to_json(r.lambda1_g)},
          {"lambda1_f", to_json(r.lambda1_f)},
          {"spectral_radius_V", to_json(r.spectral_radius_V)},
          {"tir_consistent", r.tir_consistent}};
}

namespace {

long long int_from(const json& v) {
  if (v.is_string()) return std::stoll(v.get<std::string>());
  return v.get<long long>();
}

}  // namespace

PicLattice lattice_from_json(const json& j) {
  PicLattice lat;
  lat.generators = j.at("generators").get<std::vector<std::string>>();
  const auto& a = j.at("action");
  auto n = static_cast<Eigen::Index>(a.size());
  lat.action = IntMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(a[i].size()) != n) throw std::invalid_argument("action must be square");
    for (Eigen::Index k = 0; k < n; ++k) lat.action(i, k) = int_from(a[i][k]);
  }
  if (j.contains("torsion"))
    for (const auto& [g, o] : j.at("torsion").items()) lat.torsion[g] = static_cast<int>(int_from(o));
  if (j.contains("lambda1_g")) {
    const auto& l = j.at("lambda1_g");
    mpq_class q(l.is_string() ? l.get<std::string>() : l.dump());
    q.canonicalize();
    lat.lambda1_g = q;
  }
  if (j.contains("p_indices")) lat.p_indices = j.at("p_indices").get<std::vector<int>>();
  if (j.contains("q_indices")) lat.q_indices = j.at("q_indices").get<std::vector<int>>();
  lat.validate();
  return lat;
}

}  // namespace pbundle
