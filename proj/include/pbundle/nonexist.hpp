#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pbundle/bundles.hpp"
#include "pbundle/homog.hpp"

namespace pbundle {

enum class Status { unknown, scalar, zero };
std::string to_string(Status s);

// Coefficient a_exp of polynomial F_poly.
struct Var {
  int poly = 0;
  Exponent exp;
  friend bool operator==(const Var&, const Var&) = default;
};

struct SysTerm {
  int var;
  mpz_class mult;
  int power;
};

// [t^u] of a chart-V polynomial: own var at omega^0 plus the listed terms.
struct Constraint {
  int own;
  std::vector<SysTerm> terms;
};

enum class SystemKind { cascade, chain };

// cascade: Sym^d M(F) in O(V)[t].
// chain: G_i = sum_{j<=i} (-omega)^{i-j} Sym^d M(F_j) in O(V)[t] for i = 0..r.
struct ConstraintSystem {
  SystemKind kind;
  int r, d;
  std::vector<Exponent> monos;
  std::vector<Constraint> cons;  // cons[v].own == v

  int num_polys() const { return kind == SystemKind::cascade ? 1 : r + 1; }
  int var(int poly, const Exponent& u) const;
  Var var_info(int v) const;
};

ConstraintSystem build_system(SystemKind kind, int r, int d);

struct JustTerm {
  Var var;
  std::string mult;
  int power;
  Status status;
  friend bool operator==(const JustTerm&, const JustTerm&) = default;
};

struct Step {
  std::string rule;
  Var examined;
  Var affected;
  std::vector<JustTerm> justification;
  std::vector<std::pair<int, std::string>> combination;  // elimination only
};

inline const char* kScalarRule = "scalar-by-intersection";
inline const char* kZeroRule = "zero-by-omega-rigidity";
inline const char* kRelationRule = "relation-by-omega-rigidity";
inline const char* kEliminationRule = "zero-by-elimination";

struct VanishingCertificate {
  SystemKind system = SystemKind::cascade;
  int r = 0, d = 0;
  unsigned long p = 0;  // 0 = rationals
  std::string mode;     // "scheduled" or "frontier"
  std::vector<Step> steps;

  std::vector<Var> zeros() const;
};

// (0,...,0,k,d-k-1) + e_i, 0 <= k <= d-2, 0 <= i <= r.
std::vector<Exponent> vanishing_family(int r, int d);

enum class CascadeMode { scheduled, frontier };

VanishingCertificate run_cascade(int r, int d, unsigned long p = 0, CascadeMode mode = CascadeMode::scheduled);

struct ReplayResult {
  bool ok = false;
  std::string error;
  std::vector<Var> zeros;
};

ReplayResult replay(const VanishingCertificate& cert);

struct CommonZeroProof {
  int r = 0, d = 0;
  unsigned long p = 0;
  bool established = false;
  std::string mode;
  VanishingCertificate cert;
  Exponent point;  // d * e_r scaled to a projective point
};

CommonZeroProof conclude_common_zero(int r, int d, unsigned long p = 0);

struct Verdict {
  enum class Kind { nonexistent, not_excluded, undetermined };
  Kind kind = Kind::undetermined;
  std::string reason;
  int block = -1;
  std::string normalization;
  std::optional<CommonZeroProof> proof;
};

std::string to_string(Verdict::Kind k);

Verdict nonexistence_verdict(const BundleDescriptor& desc, int d, unsigned long p = 0);

// JSON-lines form: header line, one line per step, summary line.
std::string certificate_to_jsonl(const VanishingCertificate& cert);
std::vector<VanishingCertificate> certificates_from_jsonl(const std::string& text);

}  // namespace pbundle
