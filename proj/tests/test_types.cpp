#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frn/rng.hpp"
#include "frn/types.hpp"

using namespace frn;

namespace {

Grid<int> raw_grid(int n) { return Grid<int>(n, 0); }

}  // namespace

TEST_CASE("canonicalize_scores maps rank positions onto the score set") {
  // ranks: j2 first, j4 second, cap 3 -> scores 3 and 2
  Grid<int> raw = raw_grid(5);
  raw(0, 2) = 1;
  raw(0, 4) = 2;
  const ScoreMatrix s =
      canonicalize_scores(raw, {3, 3, 3, 3, 3}, ScoreInput::RankPositions);
  CHECK(s.score(0, 2) == 3);
  CHECK(s.score(0, 4) == 2);
  CHECK(s.score(0, 1) == 0);
  CHECK(s.score(0, 3) == 0);
  CHECK(out_degrees(s)[0] == 2);
}

TEST_CASE("canonicalize_scores keeps empty rows empty") {
  const ScoreMatrix s = canonicalize_scores(raw_grid(4), {5, 5, 5, 5});
  for (int i = 0; i < 4; ++i) CHECK(out_degrees(s)[i] == 0);
  s.validate();
}

TEST_CASE("canonicalize_scores fills a full row with {m..1}") {
  Grid<int> raw = raw_grid(4);
  raw(0, 1) = 9;  // arbitrary distinct positives, order preserved
  raw(0, 2) = 4;
  raw(0, 3) = 7;
  const ScoreMatrix s = canonicalize_scores(raw, {3, 3, 3, 3});
  CHECK(s.score(0, 1) == 3);
  CHECK(s.score(0, 3) == 2);
  CHECK(s.score(0, 2) == 1);
  CHECK(out_degrees(s)[0] == 3);
  s.validate();
}

TEST_CASE("canonicalize_scores rejects bad rows") {
  SUBCASE("duplicate values") {
    Grid<int> raw = raw_grid(4);
    raw(0, 1) = 2;
    raw(0, 2) = 2;
    CHECK_THROWS_AS(canonicalize_scores(raw, {3, 3, 3, 3}), ValidationError);
  }
  SUBCASE("too many nominations") {
    Grid<int> raw = raw_grid(4);
    raw(0, 1) = 1;
    raw(0, 2) = 2;
    raw(0, 3) = 3;
    CHECK_THROWS_AS(canonicalize_scores(raw, {2, 2, 2, 2}), ValidationError);
  }
  SUBCASE("negative entries") {
    Grid<int> raw = raw_grid(4);
    raw(0, 1) = -7;
    CHECK_THROWS_AS(canonicalize_scores(raw, {3, 3, 3, 3}), ValidationError);
  }
  SUBCASE("rank positions with gaps") {
    Grid<int> raw = raw_grid(4);
    raw(0, 1) = 1;
    raw(0, 2) = 3;
    CHECK_THROWS_AS(canonicalize_scores(raw, {3, 3, 3, 3}, ScoreInput::RankPositions),
                    ValidationError);
  }
}

TEST_CASE("canonicalize_scores is idempotent on its own output") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const int m = 1 + static_cast<int>(rng.below(n - 1));
    Grid<int> raw = raw_grid(n);
    for (int i = 0; i < n; ++i) {
      // random distinct positive values on a random subset of columns
      int d = static_cast<int>(rng.below(m + 1));
      int value = 1 + static_cast<int>(rng.below(5));
      for (int j = 0; j < n && d > 0; ++j) {
        if (j == i) continue;
        if (rng.uniform() < 0.5) {
          raw(i, j) = value;
          value += 1 + static_cast<int>(rng.below(4));
          --d;
        }
      }
    }
    const ScoreMatrix once = canonicalize_scores(raw, std::vector<int>(n, m));
    once.validate();
    Grid<int> again = raw_grid(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) again(i, j) = once.score(i, j);
    const ScoreMatrix twice = canonicalize_scores(again, std::vector<int>(n, m));
    CHECK(once == twice);
  }
}

TEST_CASE("out_degrees counts positive non-missing entries") {
  ScoreMatrix s(4, 3);
  SUBCASE("all zero") {
    for (int d : out_degrees(s)) CHECK(d == 0);
  }
  SUBCASE("scores 3,2,1") {
    s.set_score(0, 1, 3);
    s.set_score(0, 2, 2);
    s.set_score(0, 3, 1);
    CHECK(out_degrees(s)[0] == 3);
  }
  SUBCASE("missing entries are not nominations") {
    s.set_score(0, 1, 3);
    s.set_score(0, 2, kMissingScore);
    CHECK(out_degrees(s)[0] == 1);
  }
}

TEST_CASE("score matrix validator enforces the row score set") {
  ScoreMatrix s(4, 3);
  s.set_score(0, 1, 3);
  s.set_score(0, 2, 2);
  s.validate();  // {2,3} = {m-d+1..m} for d=2, m=3
  s.set_score(0, 3, 3);
  CHECK_THROWS_AS(s.validate(), ValidationError);  // duplicate
  s.set_score(0, 3, 0);
  s.set_score(1, 0, 1);  // {1} but m=3 needs {3}
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("design data layout and row-constant detection") {
  DesignData design(3, true);
  design.add_row_covariate("r1", Eigen::Vector3d(1, 2, 3));
  design.add_col_covariate("c1", Eigen::Vector3d(4, 5, 6));
  Grid<double> xd(3, 0.0);
  xd(0, 1) = 1.0;
  design.add_dyad_covariate("d1", xd);
  design.validate();

  CHECK(design.p() == 4);
  const auto names = design.parameter_names();
  REQUIRE(names.size() == 4);
  CHECK(names[0] == "beta_intercept");
  CHECK(names[1] == "beta_row_r1");
  CHECK(names[2] == "beta_col_c1");
  CHECK(names[3] == "beta_dyad_d1");

  const Eigen::VectorXd x = design.regressor(1, 2);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);
  CHECK(x[2] == 6.0);
  CHECK(x[3] == 0.0);

  // intercept slice is row-constant; d1 is not
  const auto offenders = design.row_constant_dyad_slices();
  REQUIRE(offenders.size() == 1);
  CHECK(offenders[0] == "intercept");

  Grid<double> mean(3, 0.0);
  design.mean_matrix(Eigen::Vector4d(0.5, 1.0, 2.0, 3.0), mean);
  CHECK(mean(1, 2) == doctest::Approx(0.5 + 2.0 + 12.0 + 0.0));
  CHECK(mean(0, 1) == doctest::Approx(0.5 + 1.0 + 10.0 + 3.0));
}

TEST_CASE("srm params validation") {
  SrmParams p = SrmParams::zero(4, 2);
  p.validate();
  p.rho = 1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.rho = 0.0;
  p.sigma_ab << 1.0, 2.0, 2.0, 1.0;  // not PD
  CHECK_THROWS_AS(p.validate(), ValidationError);
}
