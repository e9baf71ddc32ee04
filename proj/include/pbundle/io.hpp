#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "pbundle/dyn.hpp"
#include "pbundle/endo.hpp"
#include "pbundle/nonexist.hpp"

namespace pbundle {

using json = nlohmann::json;

// "Q" or {"Fp": p}; 0 stands for Q.
unsigned long field_from_json(const json& j);
json field_to_json(unsigned long p);

BundleDescriptor descriptor_from_json(const json& j);
json to_json(const BundleDescriptor& d);

using AnyCandidate = std::variant<EndoCandidate<Q>, EndoCandidate<Fp>>;

AnyCandidate candidate_from_json(const json& j);

namespace detail {

template <FieldScalar K>
json formal_to_json(const FormalScalar<K>& s) {
  if (s.twist.empty()) return s.value.to_string();
  json t = json::object();
  for (const auto& [k, e] : s.twist) t[k] = e;
  return {{"value", s.value.to_string()}, {"twist", t}};
}

}  // namespace detail

template <FieldScalar K>
json candidate_to_json(const EndoCandidate<K>& c) {
  unsigned long p = c.curve->field.characteristic();
  json out;
  out["curve"] = {{"field", field_to_json(p)}, {"lambda", c.curve->lambda.to_string()}};
  out["bundle"] = to_json(c.bundle);
  out["degree"] = c.degree;
  out["beta"] = detail::formal_to_json(c.beta);
  out["gammas"] = json::array();
  for (const auto& g : c.gammas) out["gammas"].push_back(detail::formal_to_json(g));
  for (const char* key : {"F", "G"}) {
    json arr = json::array();
    for (const auto& f : key[0] == 'F' ? c.F : c.G) arr.push_back(to_string(f));
    out[key] = arr;
  }
  return out;
}

json to_json(const CommonZeroReport& r);
json to_json(const VerifyReport& r);
json to_json(const Verdict& v);
json to_json(const RatInterval& r);
json to_json(const DegreeBoundVerdict& v);
json to_json(const DynReport& r);

PicLattice lattice_from_json(const json& j);

}  // namespace pbundle
