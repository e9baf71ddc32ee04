#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace pbundle;

namespace {

CurvePtr<Q> qcurve(long lambda = 2) {
  QField f;
  return make_curve(f, f.from_int(lambda));
}

using L = Laurent<Q>;

}  // namespace

TEST_SUITE("curve_field") {
  TEST_CASE("make_curve validates its parameters") {
    QField q;
    CHECK_NOTHROW(make_curve(q, q.from_int(2)));
    FpField f5(5);
    CHECK_NOTHROW(make_curve(f5, f5.from_int(2)));
    CHECK_THROWS_AS(make_curve(q, q.from_int(1)), std::invalid_argument);
    CHECK_THROWS_AS(make_curve(q, q.from_int(0)), std::invalid_argument);
    CHECK_THROWS_AS(make_curve(f5, f5.from_int(6)), std::invalid_argument);  // 6 = 1 mod 5
    FpField f3(3);
    CHECK_THROWS(make_curve(f3, f3.from_int(2)));
    CHECK_THROWS(FpField(9));
  }

  TEST_CASE("defining relation and identities") {
    auto c = qcurve();
    L y = L::y(c);
    CHECK(y * y == L::from_poly(c, c->g));
    CHECK((y * y).y_power() == 0);
    L h = L::x(c) * y + L::integer(c, 3);
    CHECK(h + L(c) == h);
    CHECK(h - h == L(c));
  }

  TEST_CASE("omega is x^2/y in canonical form") {
    auto c = qcurve();
    L w = omega(c);
    CHECK(w.y_power() == 1);
    CHECK(w.a() == Poly<Q>::monomial(c->field, Q(1), 2));
    CHECK(w.b().degree() < 0);
    CHECK_FALSE(is_regular_U(w));
    CHECK_FALSE(is_regular_V(w));
  }

  TEST_CASE("omega squared agrees with pointwise products over F_101") {
    auto c = qcurve();
    L w = omega(c), w2 = w * w;
    auto pts = oracle::affine_points(101, 2);
    std::mt19937_64 rng(7);
    std::shuffle(pts.begin(), pts.end(), rng);
    REQUIRE(pts.size() >= 20);
    for (int i = 0; i < 20; ++i) {
      auto [x0, y0] = pts[i];
      auto a = oracle::eval(w, x0, y0, 101), b = oracle::eval(w2, x0, y0, 101);
      REQUIRE(a);
      REQUIRE(b);
      CHECK(*b == oracle::mulmod(*a, *a, 101));
    }
  }

  TEST_CASE("valuations at O") {
    auto c = qcurve();
    CHECK(val_at_O(L::x(c)) == -2);
    CHECK(val_at_O(L::y(c)) == -3);
    CHECK(val_at_O(omega(c)) == -1);
    CHECK(val_at_O(L::integer(c, 5)) == 0);
    CHECK_THROWS(val_at_O(L(c)));
  }

  TEST_CASE("valuations at points and the divisor of omega") {
    auto c = qcurve();
    using PS = PointSpec<Q>;
    CHECK(val_at_point(L::y(c), PS::torsion(0)) == 1);
    CHECK(val_at_point(L::x(c), PS::torsion(0)) == 2);
    L w = omega(c);
    CHECK(val_at_point(w, PS::torsion(0)) == 3);
    CHECK(val_at_point(w, PS::torsion(1)) == -1);
    CHECK(val_at_point(w, PS::torsion(2)) == -1);
    CHECK(val_at_point(w, PS::at_O()) == -1);
    // lambda = -3: g(3) = 3*2*6 = 36, so (3, 6) is a rational point
    auto c2 = qcurve(-3);
    QField q;
    PS p = PS::affine(q.from_int(3), q.from_int(6));
    CHECK(val_at_point(L::y(c2) - L::integer(c2, 6), p) == 1);
    CHECK(val_at_point(L::x(c2) - L::integer(c2, 3), p) == 1);
    CHECK(val_at_point(L::x(c2), p) == 0);
    CHECK_THROWS(val_at_point(L::x(c2), PS::affine(q.from_int(3), q.from_int(5))));
    CHECK_THROWS(val_at_point(L(c2), p));
  }

  TEST_CASE("regularity predicates and scalars") {
    auto c = qcurve();
    L seven = L::integer(c, 7);
    CHECK(is_regular_U(seven));
    CHECK(is_regular_V(seven));
    REQUIRE(as_scalar(seven));
    CHECK(*as_scalar(seven) == Q(7));
    CHECK_FALSE(as_scalar(omega(c)));

    FpField f5(5);
    auto c5 = make_curve(f5, f5.from_int(2));
    auto h = parse_laurent(c5, "x^2*y^-5 + 2*x^2*y^-3 - x*y^-1 + y^-1");
    CHECK(is_regular_V(h));
    CHECK_FALSE(is_regular_U(h));
  }

  TEST_CASE("ring operations commute with evaluation (100 random pairs)") {
    auto c = qcurve();
    std::mt19937_64 rng(11);
    auto pts = oracle::affine_points(101, 2);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      L a = oracle::random_laurent(c, rng), b = oracle::random_laurent(c, rng);
      auto [x0, y0] = pts[pick(rng)];
      auto ea = oracle::eval(a, x0, y0, 101), eb = oracle::eval(b, x0, y0, 101);
      REQUIRE(ea);
      REQUIRE(eb);
      CHECK(*oracle::eval(a + b, x0, y0, 101) == (*ea + *eb) % 101);
      CHECK(*oracle::eval(a - b, x0, y0, 101) == (*ea + 101 - *eb) % 101);
      CHECK(*oracle::eval(a * b, x0, y0, 101) == oracle::mulmod(*ea, *eb, 101));
      CHECK(*oracle::eval(pow(a, 3), x0, y0, 101) == oracle::powmod(*ea, 3, 101));
    }
  }

  TEST_CASE("inverses of units and exact quotients") {
    auto c = qcurve();
    L u = L::x(c) * pow(L::y(c), -2) * (L::x(c) - L::integer(c, 2));
    auto inv = u.inverse();
    REQUIRE(inv);
    CHECK(*inv * u == L::integer(c, 1));
    CHECK_FALSE((L::x(c) + L::integer(c, 5)).inverse());
    L h = L::x(c) * L::y(c) + L::integer(c, 1);
    CHECK(exact_quotient(h * u, u) == h);
  }

  TEST_CASE("valuation additivity") {
    auto c = qcurve();
    std::mt19937_64 rng(3);
    using PS = PointSpec<Q>;
    QField q;
    auto c2 = qcurve(-3);
    for (int trial = 0; trial < 60; ++trial) {
      L a = oracle::random_laurent(c, rng), b = oracle::random_laurent(c, rng);
      if (a.is_zero() || b.is_zero()) continue;
      CHECK(val_at_O(a * b) == val_at_O(a) + val_at_O(b));
      for (int i = 0; i < 3; ++i)
        CHECK(val_at_point(a * b, PS::torsion(i)) == val_at_point(a, PS::torsion(i)) + val_at_point(b, PS::torsion(i)));
      L a2 = oracle::random_laurent(c2, rng), b2 = oracle::random_laurent(c2, rng);
      if (a2.is_zero() || b2.is_zero()) continue;
      PS p = PS::affine(q.from_int(3), q.from_int(6));
      CHECK(val_at_point(a2 * b2, p) == val_at_point(a2, p) + val_at_point(b2, p));
    }
  }

  TEST_CASE("principal divisors have degree zero") {
    auto c = qcurve();
    using PS = PointSpec<Q>;
    for (const L& h : {L::x(c), L::y(c), omega(c), L::x(c) - L::integer(c, 1), L::x(c) - L::integer(c, 2)}) {
      int s = val_at_O(h);
      for (int i = 0; i < 3; ++i) s += val_at_point(h, PS::torsion(i));
      CHECK(s == 0);
    }
  }

  TEST_CASE("scalar intersection: as_scalar iff regular on both charts") {
    auto c = qcurve();
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      L h = oracle::random_laurent(c, rng, 2, 2);
      bool both = is_regular_U(h) && is_regular_V(h);
      CHECK(as_scalar(h).has_value() == both);
      if (both) CHECK(h == L::constant(c, *as_scalar(h)));
    }
  }

  TEST_CASE("omega rigidity on random U-regular functions") {
    auto c = qcurve();
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> cd(1, 9);
    for (int trial = 0; trial < 50; ++trial) {
      L h = oracle::random_laurent(c, rng, 4, 0);
      REQUIRE(is_regular_U(h));
      int k = cd(rng) * (trial % 2 ? 1 : -1);
      CHECK_FALSE(is_regular_V(h + L::integer(c, k) * omega(c)));
    }
  }

  TEST_CASE("text encoding round-trips") {
    auto c = qcurve();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      L h = oracle::random_laurent(c, rng);
      CHECK(parse_laurent(c, h.to_string()) == h);
    }
    CHECK(parse_laurent(c, "w^2") == omega(c) * omega(c));
    CHECK(parse_laurent(c, "(x - 1)/x") == (L::x(c) - L::integer(c, 1)) * *L::x(c).inverse());
    CHECK_THROWS(parse_laurent(c, "1/(x + 5)"));
    CHECK_THROWS(parse_laurent(c, "x +"));
  }

  TEST_CASE("curve mismatch is rejected") {
    auto c = qcurve(2), d = qcurve(3);
    CHECK_THROWS(L::x(c) + L::x(d));
  }
}
