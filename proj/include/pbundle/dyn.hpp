#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "pbundle/endo.hpp"
#include "pbundle/homog.hpp"
#include "pbundle/scalar.hpp"

namespace pbundle {

// Closed rational interval [lo, hi].
struct RatInterval {
  mpq_class lo, hi;

  static RatInterval point(const mpq_class& q) { return {q, q}; }
  bool exact() const { return lo == hi; }
  bool contains(const mpq_class& q) const { return lo <= q && q <= hi; }
  mpq_class width() const { return hi - lo; }
  double midpoint() const { return mpq_class((lo + hi) / 2).get_d(); }
  std::string to_string() const;
};

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
// Integer polynomial, lowest degree first.
using IntPoly = std::vector<mpz_class>;
using RatPoly = std::vector<mpq_class>;

std::string poly_to_string(const IntPoly& p);

// Characteristic polynomial det(x I - A), monic, lowest degree first.
RatPoly charpoly(const Matrix<Q>& a);

// Largest positive real root of p, or nullopt if there is none.
std::optional<RatInterval> largest_positive_root(const RatPoly& p, int bits = 72);

// Maximum eigenvalue modulus, width <= 2^-30.
RatInterval spectral_radius(const Matrix<Q>& a);
RatInterval spectral_radius(const IntMatrix& a);

Matrix<Q> companion(const IntPoly& p);

// (min, max) of the root moduli of p; p must have degree >= 1.
std::pair<RatInterval, RatInterval> root_modulus_range(const IntPoly& p);

// max(lambda_g, d)
RatInterval product_formula(const RatInterval& lambda_g, long d);

struct Annihilator {
  IntPoly coeffs;
  mpz_class content;  // d^{j+1} or d^j
  IntPoly primitive;  // (x^l - d^l)/(x - d) or x^l - d^l
  bool degenerate = false;  // constant polynomial, carries no root information
  std::string to_string() const;
};

// d^{j+1} (x^l - d^l) / (x - d)
Annihilator annihilator_from_indices(int j, int ell, long d);
// d^j (x^l - d^l)
Annihilator annihilator_q_chain(int j, int ell, long d);

struct PicLattice {
  std::vector<std::string> generators;
  // action(i, j) = coefficient of generator i in g^* of generator j
  IntMatrix action;
  std::map<std::string, int> torsion;  // generator -> order
  std::optional<mpq_class> lambda1_g;
  std::vector<int> p_indices;
  std::vector<int> q_indices;

  void validate() const;
  std::vector<int> free_generators() const;
  IntMatrix free_action() const;
};

struct RelationChain {
  std::string sequence;  // "p" or "q"
  int j = 0, ell = 0;
  Annihilator annihilator;
  bool divides_charpoly = false;
};

struct DegreeBoundVerdict {
  bool confirmed = false;
  RatInterval rho;
  std::optional<RatInterval> sqrt_lambda1;
  bool tir_consistent = true;  // rho <= sqrt(lambda1_g) + tol
  std::vector<RelationChain> chains;
  std::string reason;
};

inline const mpq_class kTirTolerance = mpq_class(1, 1 << 20);

DegreeBoundVerdict check_degree_bound(const PicLattice& lat, long d);

// Interval enclosure of sqrt(q) for q >= 0, exact when q is a rational square.
RatInterval sqrt_interval(const mpq_class& q, int bits = 40);

struct DynReport {
  int fibre_degree = 0;
  RatInterval lambda1_g;
  RatInterval lambda1_f;
  RatInterval spectral_radius_V;
  bool tir_consistent = true;
};

DynReport dyn_report(const PicLattice& lat, int fibre_degree);

template <FieldScalar K>
int fibre_degree(const EndoCandidate<K>& c, const VerifyOptions& opt = {}) {
  auto rep = check_compatibility(c, opt);
  if (!rep.passed) throw std::invalid_argument("fibre_degree needs a verified candidate");
  return c.degree;
}

}  // namespace pbundle
