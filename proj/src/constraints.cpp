#include "frn/constraints.hpp"

#include <algorithm>
#include <string>

namespace frn {

namespace {

void throw_if_collapsed(const ConstraintInterval& iv, const char* where) {
  if (iv.lo > iv.hi)
    throw NumericalError(std::string("collapsed truncation interval in ") + where +
                         " (lo > hi): corrupted chain state");
}

}  // namespace

RowContext RowContext::build(const ScoreMatrix& s, const LatentMatrix& y, int i) {
  RowContext ctx;
  const int n = s.n();
  ctx.m = s.cap(i);

  int d = 0;
  for (int j = 0; j < n; ++j)
    if (j != i && s.score(i, j) > 0) ++d;
  ctx.d = d;
  ctx.min_score = ctx.m - d + 1;
  ctx.ranked.assign(d, 0.0);

  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const int sc = s.score(i, j);
    if (sc == kMissingScore) continue;
    if (sc == 0) {
      ctx.max_unranked = std::max(ctx.max_unranked, y(i, j));
    } else {
      const int idx = sc - ctx.min_score;
      if (idx < 0 || idx >= d)
        throw ValidationError("row " + std::to_string(i) +
                              ": score outside the canonical set");
      ctx.ranked[idx] = y(i, j);
    }
  }

  ctx.prefix_max.resize(d);
  ctx.suffix_min.resize(d);
  for (int k = 0; k < d; ++k)
    ctx.prefix_max[k] = k == 0 ? ctx.ranked[0] : std::max(ctx.prefix_max[k - 1], ctx.ranked[k]);
  for (int k = d - 1; k >= 0; --k)
    ctx.suffix_min[k] = k == d - 1 ? ctx.ranked[d - 1] : std::min(ctx.suffix_min[k + 1], ctx.ranked[k]);
  return ctx;
}

double RowContext::max_ranked_below(int score) const {
  int idx = score - min_score - 1;
  if (idx < 0 || d == 0) return -kInf;
  idx = std::min(idx, d - 1);
  return prefix_max[idx];
}

double RowContext::min_ranked_above(int score) const {
  const int idx = std::max(score - min_score + 1, 0);
  if (idx >= d) return kInf;
  return suffix_min[idx];
}

ConstraintInterval interval_frn(const RowContext& ctx, int score) {
  ConstraintInterval iv;
  if (score > 0) {
    const double below = std::max(ctx.max_ranked_below(score), ctx.max_unranked);
    iv.lo = std::max(0.0, below);
    iv.hi = ctx.min_ranked_above(score);
  } else if (ctx.d < ctx.m) {
    iv.hi = 0.0;
  } else {
    iv.hi = ctx.min_ranked();
  }
  throw_if_collapsed(iv, "interval_frn");
  return iv;
}

ConstraintInterval interval_rank(const RowContext& ctx, int score) {
  ConstraintInterval iv;
  if (score > 0)
    iv.lo = std::max(ctx.max_ranked_below(score), ctx.max_unranked);
  iv.hi = ctx.min_ranked_above(score);
  throw_if_collapsed(iv, "interval_rank");
  return iv;
}

ConstraintInterval interval_binary(int score) {
  return score > 0 ? ConstraintInterval{0.0, kInf} : ConstraintInterval{-kInf, 0.0};
}

ConstraintInterval interval_censored_binary(const RowContext& ctx, int score) {
  ConstraintInterval iv;
  if (score > 0) {
    iv.lo = std::max(0.0, ctx.max_unranked);
  } else if (ctx.d < ctx.m) {
    iv.hi = 0.0;
  } else {
    iv.hi = ctx.min_ranked();
  }
  throw_if_collapsed(iv, "interval_censored_binary");
  return iv;
}

ConstraintInterval interval_missing() { return ConstraintInterval{}; }

ConstraintInterval interval_frn(const ScoreMatrix& s, const LatentMatrix& y,
                                int i, int j) {
  return interval_frn(RowContext::build(s, y, i), s.score(i, j));
}

ConstraintInterval interval_rank(const ScoreMatrix& s, const LatentMatrix& y,
                                 int i, int j) {
  return interval_rank(RowContext::build(s, y, i), s.score(i, j));
}

ConstraintInterval interval_binary(const ScoreMatrix& s, int i, int j) {
  return interval_binary(s.score(i, j));
}

ConstraintInterval interval_censored_binary(const ScoreMatrix& s,
                                            const LatentMatrix& y, int i, int j) {
  return interval_censored_binary(RowContext::build(s, y, i), s.score(i, j));
}

MembershipResult validate_membership(const ScoreMatrix& s, const LatentMatrix& y,
                                     LikelihoodFamily family) {
  MembershipResult res;
  const int n = s.n();
  const bool needs_positive = family != LikelihoodFamily::Rank;
  const bool needs_order = family == LikelihoodFamily::Frn || family == LikelihoodFamily::Rank;

  for (int i = 0; i < n; ++i) {
    // Columns of the row's positive scores, sorted ascending by score, plus
    // the extreme unranked value.
    std::vector<std::pair<int, int>> ranked;  // (score, column)
    int max_unranked_col = -1;
    double max_unranked = -kInf;
    int d = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const int sc = s.score(i, j);
      if (sc == kMissingScore) continue;
      if (sc > 0) {
        ranked.emplace_back(sc, j);
        ++d;
      } else if (y(i, j) > max_unranked) {
        max_unranked = y(i, j);
        max_unranked_col = j;
      }
    }
    std::sort(ranked.begin(), ranked.end());
    const bool censored = d >= s.cap(i);

    if (needs_positive) {
      for (const auto& [sc, j] : ranked)
        if (!(y(i, j) > 0.0))
          res.violations.push_back({i, j, -1, "ranked_positive"});
    }

    if (needs_order) {
      // within-row score order: adjacent offenders witness any breach
      for (std::size_t k = 0; k + 1 < ranked.size(); ++k)
        if (!(y(i, ranked[k + 1].second) > y(i, ranked[k].second)))
          res.violations.push_back(
              {i, ranked[k + 1].second, ranked[k].second, "score_order"});
      if (!ranked.empty() && max_unranked_col >= 0 &&
          !(y(i, ranked.front().second) > max_unranked))
        res.violations.push_back(
            {i, ranked.front().second, max_unranked_col, "score_order"});
    }

    switch (family) {
      case LikelihoodFamily::Frn:
      case LikelihoodFamily::CensoredBinary:
        if (!censored) {
          for (int j = 0; j < n; ++j)
            if (j != i && s.score(i, j) == 0 && y(i, j) > 0.0)
              res.violations.push_back({i, j, -1, "unranked_nonpositive"});
        } else if (family == LikelihoodFamily::CensoredBinary && !ranked.empty() &&
                   max_unranked_col >= 0) {
          // ranked block must not dip below the unranked block
          double min_ranked = kInf;
          int min_ranked_col = -1;
          for (const auto& [sc, j] : ranked)
            if (y(i, j) < min_ranked) {
              min_ranked = y(i, j);
              min_ranked_col = j;
            }
          if (min_ranked < max_unranked)
            res.violations.push_back(
                {i, min_ranked_col, max_unranked_col, "censoring_order"});
        }
        break;
      case LikelihoodFamily::Binary:
        for (int j = 0; j < n; ++j)
          if (j != i && s.score(i, j) == 0 && y(i, j) > 0.0)
            res.violations.push_back({i, j, -1, "unranked_nonpositive"});
        break;
      case LikelihoodFamily::Rank:
        break;
    }
  }

  res.member = res.violations.empty();
  return res;
}

}  // namespace frn
