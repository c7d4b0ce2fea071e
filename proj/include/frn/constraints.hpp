#pragma once

#include <vector>

#include "frn/types.hpp"

namespace frn {

/// One-row cache for interval computation: every bracket of the constrained
/// latent update is a max/min over the row's current latent values, so one
/// O(n) sweep over the row supports O(1) lookups per pair afterwards.
struct RowContext {
  int d = 0;            // observed outdegree
  int m = 0;            // nomination cap m_i
  int min_score = 0;    // lowest positive score present (m - d + 1 when d > 0)
  std::vector<double> ranked;      // latent value by score: ranked[s - min_score]
  std::vector<double> prefix_max;  // running max of `ranked`
  std::vector<double> suffix_min;  // running min of `ranked`
  double max_unranked = -kInf;     // largest latent value with observed score 0

  static RowContext build(const ScoreMatrix& s, const LatentMatrix& y, int i);

  double value_at_score(int score) const { return ranked[score - min_score]; }
  double max_ranked_below(int score) const;  // -kInf when none
  double min_ranked_above(int score) const;  // +kInf when none
  double min_ranked() const { return d == 0 ? kInf : suffix_min[0]; }
};

// Truncation intervals realizing membership of y_{i,j} in the family's
// constraint set, given the rest of the row.  All throw NumericalError when
// the bracket collapses (lo > hi), which can only arise from corrupted state.
ConstraintInterval interval_frn(const RowContext& ctx, int score);
ConstraintInterval interval_rank(const RowContext& ctx, int score);
ConstraintInterval interval_binary(int score);
ConstraintInterval interval_censored_binary(const RowContext& ctx, int score);
ConstraintInterval interval_missing();

// Convenience forms that build the row context on the fly.
ConstraintInterval interval_frn(const ScoreMatrix& s, const LatentMatrix& y,
                                int i, int j);
ConstraintInterval interval_rank(const ScoreMatrix& s, const LatentMatrix& y,
                                 int i, int j);
ConstraintInterval interval_binary(const ScoreMatrix& s, int i, int j);
ConstraintInterval interval_censored_binary(const ScoreMatrix& s,
                                            const LatentMatrix& y, int i, int j);

/// A single violated association, reported as the offending ordered triple:
/// k is the second column for pairwise order conditions and -1 for threshold
/// conditions on (i, j) alone.
struct Violation {
  int i = 0;
  int j = 0;
  int k = -1;
  const char* condition = "";
};

struct MembershipResult {
  bool member = true;
  std::vector<Violation> violations;
  explicit operator bool() const { return member; }
};

/// Exact membership of Y in F(S), R(S), B(S) or C(S).  Missing score entries
/// impose nothing.  O(n^2).
MembershipResult validate_membership(const ScoreMatrix& s, const LatentMatrix& y,
                                     LikelihoodFamily family);

}  // namespace frn
