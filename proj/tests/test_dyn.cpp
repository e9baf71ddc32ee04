#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "pbundle/dyn.hpp"
#include "pbundle/io.hpp"

using namespace pbundle;

#ifndef PBUNDLE_FIXTURES
#define PBUNDLE_FIXTURES "fixtures"
#endif

namespace {

PicLattice load_lattice(const std::string& name) {
  std::ifstream in(std::string(PBUNDLE_FIXTURES) + "/" + name);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return lattice_from_json(json::parse(s.str()));
}

double float_radius(const IntMatrix& a) {
  Eigen::MatrixXd m = a.cast<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double r = 0;
  for (int i = 0; i < m.rows(); ++i) r = std::max(r, std::abs(es.eigenvalues()[i]));
  return r;
}

IntMatrix mat(std::initializer_list<std::initializer_list<long long>> rows) {
  IntMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_SUITE("dyn") {
  TEST_CASE("spectral radius examples") {
    CHECK(spectral_radius(IntMatrix::Identity(3, 3)).contains(1));
    CHECK(spectral_radius(mat({{7}})).exact());
    CHECK(spectral_radius(mat({{7}})).lo == 7);
    CHECK(spectral_radius(mat({{0, 1}, {-1, 0}})).contains(1));
    CHECK(spectral_radius(mat({{0, 1}, {0, 0}})).contains(0));
    auto phi = spectral_radius(mat({{1, 1}, {1, 0}}));
    CHECK(phi.width() <= mpq_class(1, 1 << 30));
    CHECK(std::abs(phi.midpoint() - (1 + std::sqrt(5.0)) / 2) < 1e-9);
    CHECK(spectral_radius(mat({{-4, 0}, {0, 3}})).contains(4));
    CHECK(spectral_radius(mat({{0, -4}, {1, -2}})).contains(2));
  }

  TEST_CASE("spectral radius matches a floating eigen-solver") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> dim(1, 6), ent(-10, 10);
    for (int trial = 0; trial < 50; ++trial) {
      int n = dim(rng);
      IntMatrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = ent(rng);
      auto iv = spectral_radius(a);
      double fl = float_radius(a);
      INFO("trial " << trial << " rho=" << iv.to_string() << " float=" << fl);
      CHECK(iv.width() <= mpq_class(1, 1 << 30));
      // repeated eigenvalues lose about half the float digits
      CHECK(std::abs(iv.midpoint() - fl) <= 1e-6 * std::max(1.0, fl));
    }
  }

  TEST_CASE("charpoly and companion") {
    IntPoly p{4, 2, 1};
    auto cp = charpoly(companion(p));
    REQUIRE(cp.size() == 3);
    CHECK(cp[0] == 4);
    CHECK(cp[1] == 2);
    CHECK(cp[2] == 1);
    auto [lo, hi] = root_modulus_range(p);
    CHECK(lo.contains(2));
    CHECK(hi.contains(2));
    CHECK_FALSE(largest_positive_root({1, 0, 1}).has_value());
    auto r = largest_positive_root({-2, 0, 1});
    REQUIRE(r);
    CHECK(std::abs(r->midpoint() - std::sqrt(2.0)) < 1e-12);
  }

  TEST_CASE("annihilator root moduli") {
    const mpq_class tol(1, 1 << 20);
    for (int j = 0; j <= 3; ++j)
      for (int ell = 2; ell <= 5; ++ell)
        for (long d = 2; d <= 5; ++d) {
          INFO("j=" << j << " ell=" << ell << " d=" << d);
          auto a = annihilator_from_indices(j, ell, d);
          CHECK_FALSE(a.degenerate);
          CHECK(a.content == mpz_class(std::pow(d, j + 1)));
          auto [lo, hi] = root_modulus_range(a.primitive);
          CHECK(lo.lo >= d - tol);
          CHECK(hi.hi <= d + tol);
          auto q = annihilator_q_chain(j, ell, d);
          auto [qlo, qhi] = root_modulus_range(q.primitive);
          CHECK(qlo.lo >= d - tol);
          CHECK(qhi.hi <= d + tol);
        }
    auto ex = annihilator_from_indices(1, 3, 2);
    CHECK(ex.to_string() == "4*(x^2 + 2*x + 4)");
    CHECK(annihilator_from_indices(2, 1, 3).degenerate);
    CHECK_THROWS(annihilator_from_indices(0, 0, 3));
  }

  TEST_CASE("product formula") {
    for (long lam = 1; lam <= 12; ++lam)
      for (long d = 1; d <= 12; ++d) {
        auto r = product_formula(RatInterval::point(lam), d);
        CHECK(r.exact());
        CHECK(r.lo == std::max(lam, d));
      }
    CHECK(product_formula(RatInterval::point(9), 3).lo == 9);
    RatInterval wide{mpq_class(2), mpq_class(5)};
    auto r = product_formula(wide, 3);
    CHECK(r.lo == 3);
    CHECK(r.hi == 5);
    CHECK_THROWS(product_formula(RatInterval::point(2), 0));
    CHECK_THROWS(product_formula(RatInterval::point(mpq_class(1, 2)), 2));
  }

  TEST_CASE("sqrt enclosures") {
    CHECK(sqrt_interval(9).exact());
    CHECK(sqrt_interval(mpq_class(9, 4)).lo == mpq_class(3, 2));
    auto s2 = sqrt_interval(2);
    CHECK(s2.lo * s2.lo <= 2);
    CHECK(s2.hi * s2.hi >= 2);
    CHECK(s2.width() <= mpq_class(1, 1ul << 30));
  }

  TEST_CASE("degree bound on lattice fixtures") {
    auto m3 = load_lattice("lattice_mult3.json");
    CHECK(m3.free_generators() == std::vector<int>{2});
    auto v3 = check_degree_bound(m3, 3);
    CHECK(v3.confirmed);
    CHECK(v3.tir_consistent);
    CHECK_FALSE(check_degree_bound(m3, 2).confirmed);

    auto comp = check_degree_bound(load_lattice("lattice_companion.json"), 2);
    CHECK(comp.confirmed);
    CHECK(comp.tir_consistent);
    REQUIRE(comp.chains.size() == 1);
    CHECK(comp.chains[0].j == 0);
    CHECK(comp.chains[0].ell == 3);
    CHECK(comp.chains[0].divides_charpoly);

    auto bad = check_degree_bound(load_lattice("lattice_inconsistent.json"), 5);
    CHECK(bad.confirmed);
    CHECK_FALSE(bad.tir_consistent);

    auto rep = dyn_report(m3, 3);
    CHECK(rep.lambda1_f.lo == 9);
    CHECK(rep.spectral_radius_V.contains(3));
  }

  TEST_CASE("lattice validation") {
    PicLattice lat;
    lat.generators = {"A", "B"};
    lat.action = mat({{1, 0}, {0, 2}});
    lat.torsion = {{"A", 2}};
    CHECK_NOTHROW(lat.validate());
    lat.action = mat({{1, 1}, {0, 2}});  // g^* of the torsion class B has an A component
    lat.torsion = {{"B", 2}};
    CHECK_THROWS(lat.validate());
    lat.action = mat({{1, 0}});
    CHECK_THROWS(lat.validate());
    PicLattice nolam;
    nolam.generators = {"A"};
    nolam.action = mat({{2}});
    CHECK_THROWS(dyn_report(nolam, 2));
  }
}
