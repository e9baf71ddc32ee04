#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "pbundle/nonexist.hpp"

using namespace pbundle;

namespace {

using L = Laurent<Q>;
using H = HomogPoly<L>;

std::set<Exponent> cascade_zeros(int r, int d, CascadeMode mode = CascadeMode::scheduled, unsigned long p = 0) {
  std::set<Exponent> out;
  for (const auto& v : run_cascade(r, d, p, mode).zeros()) out.insert(v.exp);
  return out;
}

BundleDescriptor desc_of(std::vector<std::pair<int, int>> blocks) {
  BundleDescriptor d;
  for (auto [rank, order] : blocks) {
    Summand s{rank, {}};
    if (order >= 2) s.twist = {Twist::Kind::torsion, order, ""};
    d.summands.push_back(s);
  }
  return d;
}

}  // namespace

TEST_SUITE("nonexist") {
  TEST_CASE("vanishing family shape") {
    for (int r = 1; r <= 5; ++r)
      for (int d = 2; d <= 7; ++d) {
        auto fam = vanishing_family(r, d);
        CHECK(fam.size() == static_cast<std::size_t>((r - 1) * (d - 1) + d));
        for (const auto& u : fam) {
          CHECK(exponent_degree(u) == d);
          CHECK(u[r] <= d);
        }
      }
  }

  TEST_CASE("small cascades") {
    CHECK(cascade_zeros(1, 2) == std::set<Exponent>{{0, 2}, {1, 1}});
    CHECK(cascade_zeros(1, 3) == std::set<Exponent>{{0, 3}, {1, 2}, {2, 1}});
    CHECK(cascade_zeros(2, 2) == std::set<Exponent>{{0, 0, 2}, {0, 1, 1}});
    CHECK_THROWS(run_cascade(2, 1));
    CHECK_THROWS(run_cascade(0, 3));
    CHECK_THROWS(run_cascade(1, 3, 3));
    CHECK_THROWS(run_cascade(1, 3, 9));
  }

  TEST_CASE("cascade equals the linear-propagation oracle") {
    for (auto [r, d] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {1, 4}, {2, 2}, {2, 3}}) {
      INFO("r=" << r << " d=" << d);
      CHECK(cascade_zeros(r, d, CascadeMode::frontier) == oracle::propagation_zeros(r, d));
    }
    for (auto [r, d] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 2}}) {
      INFO("r=" << r << " d=" << d);
      CHECK(cascade_zeros(r, d) == oracle::propagation_zeros(r, d));
    }
  }

  TEST_CASE("cascade zeros are forced in the bounded-pole model") {
    for (auto [r, d] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 2}, {2, 3}}) {
      INFO("r=" << r << " d=" << d);
      auto truth = oracle::bounded_pole_forced(r, d, 2 * r * d + 4);
      for (const auto& u : cascade_zeros(r, d, CascadeMode::frontier)) CHECK(truth.count(u) == 1);
    }
  }

  TEST_CASE("(2,2): a_(1,0,1) is not forced") {
    QField f;
    auto c = make_curve(f, f.from_int(2));
    L one = L::integer(c, 1), half = L::constant(c, Q(mpq_class(1, 2)));
    H F = H::monomial({1, 0, 1}, one) + H::monomial({0, 2, 0}, -half) + H::monomial({2, 0, 0}, half * L::x(c));
    for (const auto& [u, a] : F.terms()) CHECK(is_regular_U(a));
    auto img = sym_action(atiyah_matrix(c, 3), F);
    for (const auto& [u, a] : img.terms()) CHECK(is_regular_V(a));
    CHECK(F.coeff({1, 0, 1}) == one);
    CHECK(oracle::bounded_pole_forced(2, 2, 8).count({1, 0, 1}) == 0);
  }

  TEST_CASE("replay accepts engine output and rejects edits") {
    for (auto [r, d] : std::vector<std::pair<int, int>>{{1, 4}, {2, 3}, {3, 3}}) {
      for (auto mode : {CascadeMode::scheduled, CascadeMode::frontier}) {
        auto cert = run_cascade(r, d, 0, mode);
        auto ok = replay(cert);
        REQUIRE(ok.ok);
        CHECK(ok.zeros.size() == cert.zeros().size());
        for (std::size_t i = 0; i < cert.steps.size(); ++i) {
          auto bad = cert;
          auto& st = bad.steps[i];
          if (!st.justification.empty()) {
            auto& j = st.justification.front();
            j.status = j.status == Status::zero ? Status::unknown : Status::zero;
          } else {
            st.rule = st.rule == kZeroRule ? kScalarRule : kZeroRule;
          }
          CHECK_FALSE(replay(bad).ok);
        }
        auto reordered = cert;
        if (reordered.steps.size() > 1) {
          std::reverse(reordered.steps.begin(), reordered.steps.end());
          CHECK_FALSE(replay(reordered).ok);
        }
      }
    }
  }

  TEST_CASE("characteristic gate") {
    for (unsigned long p : {5ul, 7ul}) {
      for (int d : {static_cast<int>(p), static_cast<int>(2 * p)}) {
        auto cert = run_cascade(1, d, p, CascadeMode::frontier);
        CHECK(replay(cert).ok);
        for (const auto& st : cert.steps) {
          if (st.rule != kZeroRule && st.rule != kRelationRule) continue;
          for (const auto& j : st.justification)
            if (j.power == 1 && j.status != Status::zero) CHECK(mpz_class(j.mult) % p != 0);
        }
      }
    }
    CHECK(conclude_common_zero(1, 5, 0).established);
    CHECK_FALSE(conclude_common_zero(1, 5, 5).established);
    CHECK_FALSE(conclude_common_zero(1, 10, 5).established);
    for (int d = 2; d <= 4; ++d) CHECK(conclude_common_zero(1, d, 5).established);
  }

  TEST_CASE("frontier mode only adds zeros") {
    for (auto [r, d] : std::vector<std::pair<int, int>>{{1, 5}, {2, 4}, {3, 3}, {4, 3}}) {
      auto sched = cascade_zeros(r, d), front = cascade_zeros(r, d, CascadeMode::frontier);
      CHECK(std::includes(front.begin(), front.end(), sched.begin(), sched.end()));
      auto cert = run_cascade(r, d, 0, CascadeMode::frontier);
      std::set<std::pair<int, Exponent>> seen;
      for (const auto& v : cert.zeros()) CHECK(seen.insert({v.poly, v.exp}).second);
    }
  }

  TEST_CASE("common zero conclusions") {
    for (auto [r, d] : std::vector<std::pair<int, int>>{
             {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {2, 3}, {2, 4}, {3, 3}, {4, 5}, {5, 7}}) {
      INFO("r=" << r << " d=" << d);
      auto pr = conclude_common_zero(r, d);
      CHECK(pr.established);
      CHECK(pr.mode == "scheduled");
      CHECK(pr.point.back() == 1);
      CHECK(replay(pr.cert).ok);
    }
    auto two = conclude_common_zero(2, 2);
    CHECK(two.established);
    CHECK(two.mode == "frontier");
  }

  TEST_CASE("verdicts") {
    for (int d = 2; d <= 6; ++d) {
      auto v = nonexistence_verdict(desc_of({{2, 1}}), d);
      CHECK(v.kind == Verdict::Kind::nonexistent);
      REQUIRE(v.proof);
      CHECK(v.proof->established);
    }
    CHECK(nonexistence_verdict(desc_of({{2, 1}}), 1).kind == Verdict::Kind::not_excluded);
    CHECK(nonexistence_verdict(desc_of({{1, 1}, {1, 3}, {1, 3}}), 3).kind == Verdict::Kind::not_excluded);
    auto mixed = nonexistence_verdict(desc_of({{3, 1}, {1, 1}}), 3);
    CHECK(mixed.kind == Verdict::Kind::nonexistent);
    CHECK(mixed.block == 0);
    auto tw = nonexistence_verdict(desc_of({{1, 2}, {3, 4}}), 4);
    CHECK(tw.kind == Verdict::Kind::nonexistent);
    CHECK(tw.block == 1);
    auto f5 = nonexistence_verdict(desc_of({{2, 1}}), 5, 5);
    CHECK(f5.kind == Verdict::Kind::undetermined);
    CHECK(f5.reason.find("mod 5") != std::string::npos);
    CHECK(to_string(Verdict::Kind::not_excluded) == "not-excluded");
  }

  TEST_CASE("JSON-lines certificates") {
    auto a = run_cascade(2, 4), b = run_cascade(1, 5, 5, CascadeMode::frontier);
    std::string text = certificate_to_jsonl(a) + certificate_to_jsonl(b);
    auto back = certificates_from_jsonl(text);
    REQUIRE(back.size() == 2);
    CHECK(certificate_to_jsonl(back[0]) == certificate_to_jsonl(a));
    CHECK(certificate_to_jsonl(back[1]) == certificate_to_jsonl(b));
    CHECK(back[1].p == 5);
    CHECK(replay(back[0]).ok);
    std::string one = certificate_to_jsonl(a);
    auto cut = one.substr(0, one.rfind("{\"kind\":\"summary\""));
    CHECK_THROWS(certificates_from_jsonl(cut));
    auto pos = one.find("\"zeros\":");
    REQUIRE(pos != std::string::npos);
    std::string tampered = one;
    tampered.insert(pos + 8, "1");
    CHECK_THROWS(certificates_from_jsonl(tampered));
  }
}
