#pragma once

#include <cstdint>

#include "frn/constraints.hpp"
#include "frn/posterior.hpp"
#include "frn/rng.hpp"
#include "frn/types.hpp"

namespace frn {

struct SamplerConfig {
  LikelihoodFamily family = LikelihoodFamily::Frn;
  std::int64_t n_iter = 100500;
  std::int64_t burn_in = 500;
  std::int64_t thin = 25;
  std::uint64_t seed = 1;

  double prior_beta_variance = 100.0;
  double prior_sigma_df = 4.0;  // inverse-Wishart degrees of freedom, >= 3
  Eigen::Matrix2d prior_sigma_scale = Eigen::Matrix2d::Identity();
  double rho_proposal_sd = 0.1;  // random-walk sd on atanh(rho); 0 pins rho

  // Step toggles; the oracle and calibration harnesses pin blocks at truth.
  bool sample_effects = true;
  bool sample_sigma_ab = true;
  bool sample_rho = true;

  // Membership is always validated at saved iterations; this extends the
  // check to every sweep.
  bool validate_each_sweep = false;

  void validate() const;
};

struct ChainState {
  SrmParams params;
  LatentMatrix latent;
  std::int64_t iteration = 0;
  Rng rng;

  std::int64_t rho_proposals = 0;
  std::int64_t rho_accepts = 0;

  explicit ChainState(std::uint64_t seed) : rng(seed) {}
};

/// Systematic-scan Gibbs sampler for one (scores, design, family) problem.
/// Owns the per-row sweep plans and the design cross-products; all mutable
/// chain state lives in ChainState, so one sampler may serve several chains.
class GibbsSampler {
 public:
  GibbsSampler(ScoreMatrix scores, DesignData design, SamplerConfig config);

  const SamplerConfig& config() const { return config_; }
  const ScoreMatrix& scores() const { return scores_; }
  const DesignData& design() const { return design_; }

  /// Feasible deterministic-given-seed start: row-sorted draws put ranked
  /// pairs on the largest positive values in score order and everything else
  /// on negative values; parameters start at zero / identity.
  ChainState initial_state() const;

  // One full conditional update each.  update_y resamples every off-diagonal
  // pair from its truncated conditional; the others are the parameter steps.
  void update_y(ChainState& state) const;
  void update_beta(ChainState& state) const;
  void update_effects(ChainState& state) const;
  void update_sigma_ab(ChainState& state) const;
  void update_rho(ChainState& state) const;

  /// Metropolis translation of whole latent rows.  A censored row has no
  /// zero threshold, so its level is free to float and per-pair updates only
  /// let it creep; a uniform shift moves it in one step.  Rank rows are
  /// always translatable, anchored rows are skipped.  Constraint-preserving
  /// by construction.
  void update_row_levels(ChainState& state) const;

  /// Fixed order: y, row translations, beta, effects, sigma_ab, rho.
  void sweep(ChainState& state) const;

  /// Draw (beta, a, b, sigma_ab, rho) from the prior; used by the
  /// joint-distribution correctness harness.
  SrmParams draw_prior_params(Rng& rng) const;

  /// Mean surface + effects: mu(i,j) = beta^T x_{i,j} + a_i + b_j.
  void mean_with_effects(const SrmParams& params, Grid<double>& out) const;

 private:
  struct RowPlan {
    std::vector<int> ranked_cols;  // by descending score
    std::vector<int> zero_cols;
    std::vector<int> missing_cols;
  };

  // A coefficient that is confounded with an additive effect: shifting the
  // coefficient and compensating in the effect leaves the mean surface
  // unchanged.  effect 0 = sender, 1 = receiver.
  struct EffectFiber {
    int beta_index;
    int effect;
    Eigen::VectorXd z;
  };

  ScoreMatrix scores_;
  DesignData design_;
  SamplerConfig config_;
  std::vector<int> degrees_;
  std::vector<RowPlan> plans_;
  std::vector<EffectFiber> fibers_;
  Eigen::MatrixXd gram_own_;    // sum over ordered pairs of x x^T
  Eigen::MatrixXd gram_cross_;  // sum over ordered pairs of x_ij x_ji^T
};

/// Run one chain: validates inputs (a Rank fit rejects designs carrying an
/// intercept or any nominator-constant regressor), then records every thin-th
/// post-burn-in draw of (beta, sigma_ab, rho).  Reproducible given the seed.
PosteriorSample run_chain(const ScoreMatrix& scores, const DesignData& design,
                          const SamplerConfig& config);

/// Sigma ~ inverse-Wishart(df, scale) for 2x2 scale matrices.
Eigen::Matrix2d inverse_wishart_2x2(double df, const Eigen::Matrix2d& scale,
                                    Rng& rng);

}  // namespace frn
