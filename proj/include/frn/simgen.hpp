#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frn/rng.hpp"
#include "frn/types.hpp"

namespace frn {

/// Covariate recipes for synthetic networks.  GaussianWithGroup draws
/// standard-normal nominator/nominee/pair covariates plus a scaled group
/// co-membership indicator as the second pair covariate.
enum class CovariateRecipe { GaussianWithGroup };

struct ScenarioSpec {
  int n = 100;
  int m = 5;
  Eigen::VectorXd beta_true;  // [intercept, row, col, dyad1, dyad2]
  Eigen::Matrix2d sigma_ab_true;
  double rho_true = 0.9;
  CovariateRecipe recipe = CovariateRecipe::GaussianWithGroup;
  int replicates = 8;
  std::uint64_t seed = 1;
  std::string label;

  void validate() const;  // n >= 2, 1 <= m <= n-1
};

struct SimulatedNetwork {
  LatentMatrix latent;
  DesignData design;
  SrmParams truth;
};

/// Assemble latent relations from the social relations model at the given
/// parameters: correlated dyadic errors with unit variance, additive sender
/// and receiver effects, and the design's mean surface.
LatentMatrix simulate_latent(const DesignData& design, const SrmParams& params,
                             Rng& rng);

/// Draw covariates, effects and errors for one network of the scenario.
SimulatedNetwork simulate_srm(const ScenarioSpec& spec, Rng& rng);

/// Censored ranked scores from latent relations: within row i the j-th
/// strongest positive relation gets score m_i - j + 1, floored at zero, and
/// non-positive relations score 0.  Ties are broken by column index (draws
/// are continuous; ties only arise from file round-tripping).
ScoreMatrix frn_transform(const LatentMatrix& y, const std::vector<int>& m_per_row);
ScoreMatrix frn_transform(const LatentMatrix& y, int m);

/// Fraction of rows whose count of positive latent relations exceeds m.
double censoring_rate(const LatentMatrix& y, int m);

/// Intercept for which the scenario's mean uncensored outdegree hits the
/// target: bisection on a Monte Carlo estimate with common random numbers.
double solve_intercept_for_mean_outdegree(const ScenarioSpec& base, double target,
                                          std::uint64_t seed = 0x5eedbeef,
                                          int mc_samples = 100000);

/// The two simulation designs shipped with the tool:
///  - fixed_intercept: intercept -3.26, caps m in {5, 15}, 8 replicates each;
///  - matched_outdegree: caps m in {5, 15, 30, 50}, 8 replicates each, with
///    the intercept solved so the mean uncensored outdegree equals m.
std::vector<ScenarioSpec> scenario_presets();

}  // namespace frn
