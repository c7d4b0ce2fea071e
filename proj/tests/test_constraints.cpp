#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "frn/constraints.hpp"
#include "frn/rng.hpp"
#include "frn/simgen.hpp"

using namespace frn;

namespace {

// Row fixture: cap 3, scores (3,2,1,0,0) against columns 1..5 of a 6-node
// matrix, current latent values (2.5, 1.1, 0.7, -0.3, -0.8).
struct RowFixture {
  ScoreMatrix s{6, 3};
  LatentMatrix y{6};
  RowFixture() {
    const int scores[5] = {3, 2, 1, 0, 0};
    const double values[5] = {2.5, 1.1, 0.7, -0.3, -0.8};
    for (int j = 1; j < 6; ++j) {
      s.set_score(0, j, scores[j - 1]);
      y(0, j) = values[j - 1];
    }
  }
};

LatentMatrix random_member(const ScoreMatrix& s, LikelihoodFamily family, Rng& rng) {
  // row-sorted magnitudes: feasible for every family at once
  const int n = s.n();
  LatentMatrix y(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, int>> ranked;
    std::vector<int> rest;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (s.score(i, j) > 0)
        ranked.emplace_back(s.score(i, j), j);
      else
        rest.push_back(j);
    }
    std::sort(ranked.rbegin(), ranked.rend());
    std::vector<double> mags(n - 1);
    for (double& v : mags) v = std::fabs(rng.normal());
    std::sort(mags.rbegin(), mags.rend());
    std::size_t next = 0;
    for (const auto& [sc, j] : ranked) y(i, j) = mags[next++];
    for (int j : rest) y(i, j) = -mags[next++];
  }
  REQUIRE(validate_membership(s, y, family).member);
  return y;
}

ScoreMatrix random_scores(int n, int m, Rng& rng) {
  LatentMatrix y(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) y(i, j) = rng.normal();
  return frn_transform(y, m);
}

}  // namespace

TEST_CASE("frn intervals bracket ranked and unranked pairs") {
  RowFixture f;
  SUBCASE("middle score") {
    // bracketed by the next-lower and next-higher ranked values
    const ConstraintInterval iv = interval_frn(f.s, f.y, 0, 2);  // score 2
    CHECK(iv.lo == doctest::Approx(0.7));
    CHECK(iv.hi == doctest::Approx(2.5));
  }
  SUBCASE("unranked pair in a censored row") {
    const ConstraintInterval iv = interval_frn(f.s, f.y, 0, 4);
    CHECK(iv.lo == -kInf);
    CHECK(iv.hi == doctest::Approx(0.7));
  }
  SUBCASE("unranked pair in an uncensored row") {
    ScoreMatrix s(4, 3);
    LatentMatrix y(4);
    s.set_score(0, 1, 3);  // d = 1 < m = 3
    y(0, 1) = 1.0;
    const ConstraintInterval iv = interval_frn(s, y, 0, 2);
    CHECK(iv.lo == -kInf);
    CHECK(iv.hi == 0.0);
  }
  SUBCASE("top score is unbounded above") {
    const ConstraintInterval iv = interval_frn(f.s, f.y, 0, 1);
    CHECK(iv.lo == doctest::Approx(1.1));
    CHECK(iv.hi == kInf);
  }
}

TEST_CASE("rank intervals use order constraints only") {
  RowFixture f;
  SUBCASE("zero-score pair sits below the lowest ranked value") {
    const ConstraintInterval iv = interval_rank(f.s, f.y, 0, 4);
    CHECK(iv.lo == -kInf);
    CHECK(iv.hi == doctest::Approx(0.7));
  }
  SUBCASE("unique top score") {
    const ConstraintInterval iv = interval_rank(f.s, f.y, 0, 1);
    CHECK(iv.lo == doctest::Approx(1.1));
    CHECK(iv.hi == kInf);
  }
  SUBCASE("all-zero row is unconstrained") {
    ScoreMatrix s(2, 1);
    LatentMatrix y(2);
    const ConstraintInterval iv = interval_rank(s, y, 0, 1);
    CHECK(iv.whole_line());
  }
  SUBCASE("no zero floor: lowest ranked pair reaches down to max unranked") {
    const ConstraintInterval iv = interval_rank(f.s, f.y, 0, 3);  // score 1
    CHECK(iv.lo == doctest::Approx(-0.3));
    CHECK(iv.hi == doctest::Approx(1.1));
  }
}

TEST_CASE("binary intervals are pure sign constraints") {
  ScoreMatrix s(6, 4);
  s.set_score(0, 1, 4);
  CHECK(interval_binary(s, 0, 1).lo == 0.0);
  CHECK(interval_binary(s, 0, 1).hi == kInf);

  // censored row: the censoring is deliberately ignored by this family
  RowFixture f;
  const ConstraintInterval censored_zero = interval_binary(f.s, 0, 4);
  CHECK(censored_zero.lo == -kInf);
  CHECK(censored_zero.hi == 0.0);

  s.set_score(0, 2, 0);
  CHECK(interval_binary(s, 0, 2).hi == 0.0);
}

TEST_CASE("censored binary intervals couple ranked and unranked blocks") {
  SUBCASE("ranked pair above a positive unranked value") {
    ScoreMatrix s(4, 2);
    LatentMatrix y(4);
    s.set_score(0, 1, 2);
    s.set_score(0, 2, 1);  // d = m = 2: censored
    y(0, 1) = 1.5;
    y(0, 2) = 0.9;
    y(0, 3) = 0.4;  // unranked but positive
    const ConstraintInterval iv = interval_censored_binary(s, y, 0, 1);
    CHECK(iv.lo == doctest::Approx(0.4));
    CHECK(iv.hi == kInf);
  }
  SUBCASE("ranked pair with all unranked values negative") {
    RowFixture f;
    const ConstraintInterval iv = interval_censored_binary(f.s, f.y, 0, 2);
    CHECK(iv.lo == 0.0);
    CHECK(iv.hi == kInf);
  }
  SUBCASE("unranked pair in an uncensored row") {
    ScoreMatrix s(4, 3);
    LatentMatrix y(4);
    s.set_score(0, 1, 3);
    y(0, 1) = 0.5;
    const ConstraintInterval iv = interval_censored_binary(s, y, 0, 2);
    CHECK(iv.lo == -kInf);
    CHECK(iv.hi == 0.0);
  }
}

TEST_CASE("missing pairs are unconstrained") {
  CHECK(interval_missing().whole_line());
}

TEST_CASE("collapsed brackets are reported as corrupted state") {
  ScoreMatrix s(4, 3);
  LatentMatrix y(4);
  s.set_score(0, 1, 3);
  s.set_score(0, 2, 2);
  s.set_score(0, 3, 1);
  y(0, 1) = 0.2;  // inverted: the middle pair's bracket is (1.5, 0.2)
  y(0, 2) = 0.9;
  y(0, 3) = 1.5;
  CHECK_THROWS_AS(interval_frn(s, y, 0, 2), NumericalError);
  CHECK_THROWS_AS(interval_rank(s, y, 0, 2), NumericalError);
}

TEST_CASE("membership of simulated ground truth") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(6));
    const int m = 1 + static_cast<int>(rng.below(3));
    LatentMatrix y(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != i) y(i, j) = rng.normal();
    const ScoreMatrix s = frn_transform(y, m);
    CHECK(validate_membership(s, y, LikelihoodFamily::Frn).member);
    CHECK(validate_membership(s, y, LikelihoodFamily::Rank).member);
    CHECK(validate_membership(s, y, LikelihoodFamily::CensoredBinary).member);
  }
}

TEST_CASE("a nonpositive ranked value violates membership") {
  RowFixture f;
  f.y(0, 3) = -0.1;  // the score-1 pair
  const MembershipResult res = validate_membership(f.s, f.y, LikelihoodFamily::Frn);
  CHECK_FALSE(res.member);
  REQUIRE_FALSE(res.violations.empty());
  bool found = false;
  for (const auto& v : res.violations)
    if (v.i == 0 && v.j == 3 && std::string(v.condition) == "ranked_positive")
      found = true;
  CHECK(found);
}

TEST_CASE("rank membership is invariant to row shifts") {
  Rng rng(2024);
  const ScoreMatrix s = random_scores(7, 3, rng);
  const LatentMatrix y = random_member(s, LikelihoodFamily::Rank, rng);
  for (int trial = 0; trial < 100; ++trial) {
    LatentMatrix shifted = y;
    for (int i = 0; i < 7; ++i) {
      const double c = rng.normal(0.0, 10.0);
      for (int j = 0; j < 7; ++j)
        if (j != i) shifted(i, j) += c;
    }
    CHECK(validate_membership(s, shifted, LikelihoodFamily::Rank).member);
  }
  // a large positive row shift keeps rank membership but breaks the sign
  // constraints of the other families on an uncensored row
  LatentMatrix shifted = y;
  for (int j = 1; j < 7; ++j) shifted(0, j) += 100.0;
  CHECK(validate_membership(s, shifted, LikelihoodFamily::Rank).member);
  if (out_degrees(s)[0] < s.cap(0))
    CHECK_FALSE(validate_membership(s, shifted, LikelihoodFamily::Frn).member);
}

TEST_CASE("nesting: frn membership implies rank and censored-binary membership") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(3));
    LatentMatrix y(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != i) y(i, j) = rng.normal(0.3, 1.0);
    const ScoreMatrix s = frn_transform(y, m);
    REQUIRE(validate_membership(s, y, LikelihoodFamily::Frn).member);
    CHECK(validate_membership(s, y, LikelihoodFamily::Rank).member);
    CHECK(validate_membership(s, y, LikelihoodFamily::CensoredBinary).member);
  }
}

TEST_CASE("nesting failure: frn membership does not imply binary membership") {
  // censored row with a positive unranked value: inside F(S), outside B(S)
  ScoreMatrix s(4, 1);
  s.set_score(0, 1, 1);
  LatentMatrix y(4);
  y(0, 1) = 2.0;
  y(0, 2) = 0.5;  // positive but unranked: censoring hides it
  y(0, 3) = -0.2;
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (j != i) y(i, j) = -0.5 - 0.1 * j;
  REQUIRE(validate_membership(s, y, LikelihoodFamily::Frn).member);
  CHECK_FALSE(validate_membership(s, y, LikelihoodFamily::Binary).member);

  // and the reverse direction: binary membership without frn membership
  LatentMatrix other = y;
  other(0, 1) = 0.1;
  other(0, 2) = 0.7;  // outranks the ranked pair: breaks the score order
  other(0, 3) = -0.2;
  ScoreMatrix uncapped(4, 3);  // same graph, cap 3: rows uncensored
  uncapped.set_score(0, 1, 3);
  CHECK(validate_membership(uncapped, other, LikelihoodFamily::Binary).member ==
        false);  // 0.7 > 0 on an unranked pair violates the binary zero rule
  other(0, 2) = 0.0;
  CHECK(validate_membership(uncapped, other, LikelihoodFamily::Binary).member);
  CHECK(validate_membership(uncapped, other, LikelihoodFamily::Frn).member);
}

TEST_CASE("interval consistency against brute-force membership") {
  // a value lies inside the computed interval iff substituting it preserves
  // membership, on n <= 5 instances
  Rng rng(31);
  const double probes[] = {-3.7, -1.2, -0.41, -0.05, 0.03, 0.33, 0.74, 1.21, 2.6};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(3));
    const int m = 1 + static_cast<int>(rng.below(3));
    const ScoreMatrix s = random_scores(n, m, rng);
    for (LikelihoodFamily family :
         {LikelihoodFamily::Frn, LikelihoodFamily::Rank, LikelihoodFamily::Binary,
          LikelihoodFamily::CensoredBinary}) {
      LatentMatrix y = random_member(s, family, rng);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          ConstraintInterval iv;
          switch (family) {
            case LikelihoodFamily::Frn: iv = interval_frn(s, y, i, j); break;
            case LikelihoodFamily::Rank: iv = interval_rank(s, y, i, j); break;
            case LikelihoodFamily::Binary: iv = interval_binary(s, i, j); break;
            case LikelihoodFamily::CensoredBinary:
              iv = interval_censored_binary(s, y, i, j);
              break;
          }
          for (double probe : probes) {
            LatentMatrix patched = y;
            patched(i, j) = probe;
            const bool inside = iv.contains(probe);
            const bool member = validate_membership(s, patched, family).member;
            CAPTURE(trial);
            CAPTURE(i);
            CAPTURE(j);
            CAPTURE(probe);
            CHECK(inside == member);
          }
        }
    }
  }
}
