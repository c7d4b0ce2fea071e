#include "frn/sampler.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "frn/truncnorm.hpp"

namespace frn {

void SamplerConfig::validate() const {
  if (n_iter < 1) throw ValidationError("n_iter must be positive");
  if (burn_in < 0 || burn_in >= n_iter)
    throw ValidationError("burn_in must satisfy 0 <= burn_in < n_iter");
  if (thin < 1) throw ValidationError("thin must be >= 1");
  if (!(prior_beta_variance > 0.0))
    throw ValidationError("prior_beta_variance must be positive");
  if (!(prior_sigma_df >= 3.0))
    throw ValidationError("prior_sigma_df must be >= 3");
  if (!(rho_proposal_sd >= 0.0))
    throw ValidationError("rho_proposal_sd must be nonnegative");
  const double det = prior_sigma_scale(0, 0) * prior_sigma_scale(1, 1) -
                     prior_sigma_scale(0, 1) * prior_sigma_scale(1, 0);
  if (!(prior_sigma_scale(0, 0) > 0.0 && det > 0.0))
    throw ValidationError("prior_sigma_scale must be positive definite");
}

Eigen::Matrix2d inverse_wishart_2x2(double df, const Eigen::Matrix2d& scale,
                                    Rng& rng) {
  // Bartlett draw of W ~ Wishart(df, scale^-1), then invert.
  const Eigen::Matrix2d scale_inv = scale.inverse();
  Eigen::LLT<Eigen::Matrix2d> llt(scale_inv);
  if (llt.info() != Eigen::Success)
    throw NumericalError("inverse-Wishart scale is not positive definite");
  Eigen::Matrix2d t = Eigen::Matrix2d::Zero();
  t(0, 0) = std::sqrt(rng.chi_squared(df));
  t(1, 1) = std::sqrt(rng.chi_squared(df - 1.0));
  t(1, 0) = rng.normal();
  const Eigen::Matrix2d lt = llt.matrixL() * t;
  const Eigen::Matrix2d w = lt * lt.transpose();
  Eigen::Matrix2d sigma = w.inverse();
  sigma(0, 1) = sigma(1, 0) = 0.5 * (sigma(0, 1) + sigma(1, 0));
  return sigma;
}

namespace {

double inverse_wishart_1x1(double df, double scale, Rng& rng) {
  return scale / rng.chi_squared(df);
}

}  // namespace

GibbsSampler::GibbsSampler(ScoreMatrix scores, DesignData design,
                           SamplerConfig config)
    : scores_(std::move(scores)), design_(std::move(design)),
      config_(std::move(config)) {
  config_.validate();
  design_.validate();
  scores_.validate();
  const int n = scores_.n();
  if (design_.n() != n) throw ValidationError("design and scores disagree on n");

  if (config_.family == LikelihoodFamily::Rank) {
    if (design_.p_row() > 0)
      throw ValidationError(
          "rank likelihood cannot estimate nominator effects: drop the row "
          "covariates (they are constant within each nominator's row and a "
          "row-constant mean shift never changes within-row rankings)");
    const auto offenders = design_.row_constant_dyad_slices();
    if (!offenders.empty())
      throw ValidationError(
          "rank likelihood cannot estimate nominator effects: dyad regressor '" +
          offenders.front() +
          "' is constant within rows (the intercept is one such regressor)");
  }

  degrees_ = out_degrees(scores_);
  plans_.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, int>> ranked;  // (score, col)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const int sc = scores_.score(i, j);
      if (sc == kMissingScore)
        plans_[i].missing_cols.push_back(j);
      else if (sc == 0)
        plans_[i].zero_cols.push_back(j);
      else
        ranked.emplace_back(sc, j);
    }
    std::sort(ranked.rbegin(), ranked.rend());
    for (const auto& [sc, j] : ranked) plans_[i].ranked_cols.push_back(j);
  }

  // Coefficient/effect fibers: the intercept and every row covariate ride on
  // the sender effects, every column covariate on the receiver effects.
  {
    int k = 0;
    if (design_.has_intercept())
      fibers_.push_back({k++, 0, Eigen::VectorXd::Ones(n)});
    for (int c = 0; c < design_.p_row(); ++c)
      fibers_.push_back({k++, 0, design_.x_row().col(c)});
    for (int c = 0; c < design_.p_col(); ++c)
      fibers_.push_back({k++, 1, design_.x_col().col(c)});
  }

  // Design cross products for the GLS coefficient step.
  const int p = design_.p();
  gram_own_ = Eigen::MatrixXd::Zero(p, p);
  gram_cross_ = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd x_ij(p), x_ji(p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      design_.regressor(i, j, x_ij.data());
      design_.regressor(j, i, x_ji.data());
      gram_own_.noalias() += x_ij * x_ij.transpose();
      gram_cross_.noalias() += x_ij * x_ji.transpose();
    }
}

ChainState GibbsSampler::initial_state() const {
  ChainState state(config_.seed);
  const int n = scores_.n();
  state.params = SrmParams::zero(n, design_.p());
  state.latent = LatentMatrix(n);

  // Sorted magnitudes of normal draws: ranked pairs take the positive values
  // in score order, everything else goes negative.  This lies inside all four
  // constraint sets at once.
  std::vector<double> mags(n - 1);
  for (int i = 0; i < n; ++i) {
    for (double& v : mags) v = std::fabs(state.rng.normal());
    std::sort(mags.rbegin(), mags.rend());
    const RowPlan& plan = plans_[i];
    std::size_t next = 0;
    for (int j : plan.ranked_cols) state.latent(i, j) = mags[next++];
    for (int j : plan.zero_cols) state.latent(i, j) = -mags[next++];
    for (int j : plan.missing_cols) state.latent(i, j) = -mags[next++];
  }
  return state;
}

void GibbsSampler::mean_with_effects(const SrmParams& params,
                                     Grid<double>& out) const {
  design_.mean_matrix(params.beta, out);
  const int n = scores_.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.at_raw(i, j) += params.a[i] + params.b[j];
}

void GibbsSampler::update_y(ChainState& state) const {
  const int n = scores_.n();
  const double rho = state.params.rho;
  const double cond_sd = std::sqrt(1.0 - rho * rho);

  Grid<double> mu(n, 0.0);
  mean_with_effects(state.params, mu);

  LatentMatrix& y = state.latent;
  auto draw = [&](int i, int j, const ConstraintInterval& iv) {
    const double cond_mean = mu(i, j) + rho * (y(j, i) - mu(j, i));
    y(i, j) = sample_truncated_normal(cond_mean, cond_sd, iv, state.rng);
  };

  for (int i = 0; i < n; ++i) {
    const RowPlan& plan = plans_[i];
    const int d = degrees_[i];
    const int m = scores_.cap(i);
    const bool censored = d >= m;

    double max_unranked = -kInf;
    for (int j : plan.zero_cols) max_unranked = std::max(max_unranked, y(i, j));

    // Ranked pairs go first, strongest first, so each bracket reads current
    // neighbor values and the unranked block is still untouched.
    switch (config_.family) {
      case LikelihoodFamily::Frn:
        for (int k = 0; k < d; ++k) {
          const int j = plan.ranked_cols[k];
          ConstraintInterval iv;
          iv.hi = (k == 0) ? kInf : y(i, plan.ranked_cols[k - 1]);
          const double below =
              (k + 1 < d) ? y(i, plan.ranked_cols[k + 1]) : max_unranked;
          iv.lo = std::max(0.0, below);
          draw(i, j, iv);
        }
        if (!plan.zero_cols.empty()) {
          ConstraintInterval iv;
          iv.hi = censored
                      ? (d > 0 ? y(i, plan.ranked_cols[d - 1]) : kInf)
                      : 0.0;
          for (int j : plan.zero_cols) draw(i, j, iv);
        }
        break;

      case LikelihoodFamily::Rank:
        for (int k = 0; k < d; ++k) {
          const int j = plan.ranked_cols[k];
          ConstraintInterval iv;
          iv.hi = (k == 0) ? kInf : y(i, plan.ranked_cols[k - 1]);
          iv.lo = (k + 1 < d) ? y(i, plan.ranked_cols[k + 1]) : max_unranked;
          draw(i, j, iv);
        }
        if (!plan.zero_cols.empty()) {
          ConstraintInterval iv;
          iv.hi = d > 0 ? y(i, plan.ranked_cols[d - 1]) : kInf;
          for (int j : plan.zero_cols) draw(i, j, iv);
        }
        break;

      case LikelihoodFamily::Binary:
        for (int j : plan.ranked_cols) draw(i, j, {0.0, kInf});
        for (int j : plan.zero_cols) draw(i, j, {-kInf, 0.0});
        break;

      case LikelihoodFamily::CensoredBinary: {
        const ConstraintInterval ranked_iv{std::max(0.0, max_unranked), kInf};
        for (int j : plan.ranked_cols) draw(i, j, ranked_iv);
        if (!plan.zero_cols.empty()) {
          ConstraintInterval iv;
          if (censored) {
            double min_ranked = kInf;
            for (int j : plan.ranked_cols) min_ranked = std::min(min_ranked, y(i, j));
            iv.hi = min_ranked;
          } else {
            iv.hi = 0.0;
          }
          for (int j : plan.zero_cols) draw(i, j, iv);
        }
        break;
      }
    }

    for (int j : plan.missing_cols) draw(i, j, interval_missing());
  }
}

void GibbsSampler::update_row_levels(ChainState& state) const {
  const int n = scores_.n();
  LatentMatrix& y = state.latent;

  // Allowed uniform shift of row i: orderings are unaffected, so only the
  // sign thresholds bind.  Ranked values must stay positive; observed zeros
  // must stay nonpositive unless the row is censored (then they are bound to
  // the ranked block, which shifts along).
  auto shift_bounds = [&](int i, ConstraintInterval& bounds) {
    bounds = ConstraintInterval{};
    if (config_.family == LikelihoodFamily::Rank) return;
    const RowPlan& plan = plans_[i];
    const int d = degrees_[i];
    if (d > 0) {
      double min_ranked = kInf;
      for (int j : plan.ranked_cols) min_ranked = std::min(min_ranked, y(i, j));
      bounds.lo = -min_ranked;
    }
    const bool zeros_anchored = config_.family == LikelihoodFamily::Binary ||
                                d < scores_.cap(i);
    if (zeros_anchored && !plan.zero_cols.empty()) {
      double max_zero = -kInf;
      for (int j : plan.zero_cols) max_zero = std::max(max_zero, y(i, j));
      bounds.hi = -max_zero;
    }
  };

  if (config_.sample_effects && config_.family != LikelihoodFamily::Rank) {
    // Recentering: shift the row and its sender effect together.  Every dyad
    // residual is invariant along this fiber (mu_ij moves with y_ij), so the
    // exact conditional of the shift is normal with the effect-prior
    // precision, truncated to the feasible range.
    const Eigen::Matrix2d prior_precision = state.params.sigma_ab.inverse();
    const double precision = prior_precision(0, 0);
    for (int i = 0; i < n; ++i) {
      ConstraintInterval bounds;
      shift_bounds(i, bounds);
      if (!(bounds.lo < bounds.hi)) continue;
      const double center = -(prior_precision(0, 0) * state.params.a[i] +
                              prior_precision(0, 1) * state.params.b[i]) /
                            precision;
      const double delta = sample_truncated_normal(
          center, std::sqrt(1.0 / precision), bounds, state.rng);
      for (int j = 0; j < n; ++j)
        if (j != i) y(i, j) += delta;
      state.params.a[i] += delta;
    }
    return;
  }

  if (config_.family == LikelihoodFamily::Binary) return;  // fully anchored

  // Plain row translation (rank rows, or pinned effects): Metropolis step
  // against the dyad-conditional density.
  const double rho = state.params.rho;
  const double cond_var = 1.0 - rho * rho;
  const double step_sd = 2.5 * std::sqrt(cond_var / (n - 1));
  Grid<double> mu(n, 0.0);
  mean_with_effects(state.params, mu);
  for (int i = 0; i < n; ++i) {
    ConstraintInterval bounds;
    shift_bounds(i, bounds);
    const double delta = step_sd * state.rng.normal();
    if (delta <= bounds.lo || delta >= bounds.hi) continue;
    double log_accept = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double c = mu(i, j) + rho * (y(j, i) - mu(j, i));
      const double r = y(i, j) - c;
      log_accept -= delta * (2.0 * r + delta);
    }
    log_accept /= 2.0 * cond_var;
    if (std::log(state.rng.uniform_pos()) < log_accept)
      for (int j = 0; j < n; ++j)
        if (j != i) y(i, j) += delta;
  }
}

void GibbsSampler::update_beta(ChainState& state) const {
  const int n = scores_.n();
  const int p = design_.p();
  if (p == 0) return;
  const double rho = state.params.rho;
  const double scale = 1.0 / (1.0 - rho * rho);

  // Whitened cross product of regressors with dyad-pair residuals.
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd x(p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double r_ij = state.latent(i, j) - state.params.a[i] - state.params.b[j];
      const double r_ji = state.latent(j, i) - state.params.a[j] - state.params.b[i];
      design_.regressor(i, j, x.data());
      lin.noalias() += (scale * (r_ij - rho * r_ji)) * x;
    }

  Eigen::MatrixXd precision = scale * (gram_own_ - rho * gram_cross_);
  precision.diagonal().array() += 1.0 / config_.prior_beta_variance;

  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw NumericalError("singular coefficient information matrix (collinear design?)");

  Eigen::VectorXd z(p);
  for (int k = 0; k < p; ++k) z[k] = state.rng.normal();
  state.params.beta = llt.solve(lin) + llt.matrixU().solve(z);
}

void GibbsSampler::update_effects(ChainState& state) const {
  const int n = scores_.n();
  const double rho = state.params.rho;
  const double scale = 1.0 / (1.0 - rho * rho);

  // Re-balance each confounded coefficient against its effect vector: the
  // mean surface is invariant along the fiber, so the exact conditional of
  // the shift comes from the priors alone.
  auto rebalance = [&](ChainState& st) {
    const Eigen::Matrix2d prior_precision = st.params.sigma_ab.inverse();
    const double v0 = config_.prior_beta_variance;
    for (const auto& fiber : fibers_) {
      const int e = fiber.effect;
      const double precision =
          1.0 / v0 + prior_precision(e, e) * fiber.z.squaredNorm();
      double num = -st.params.beta[fiber.beta_index] / v0;
      for (int i = 0; i < n; ++i)
        num += fiber.z[i] * (prior_precision(e, 0) * st.params.a[i] +
                             prior_precision(e, 1) * st.params.b[i]);
      const double delta = st.rng.normal(num / precision, std::sqrt(1.0 / precision));
      st.params.beta[fiber.beta_index] += delta;
      if (e == 0)
        st.params.a -= delta * fiber.z;
      else
        st.params.b -= delta * fiber.z;
    }
  };

  Grid<double> mean(n, 0.0);
  design_.mean_matrix(state.params.beta, mean);

  Eigen::VectorXd& a = state.params.a;
  Eigen::VectorXd& b = state.params.b;

  if (config_.family == LikelihoodFamily::Rank) {
    // Sender effects are pinned at zero; the receiver effect is scalar-normal.
    const double sigma_bb = state.params.sigma_ab(1, 1);
    for (int i = 0; i < n; ++i) {
      double natural = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double u1 = state.latent(i, j) - mean(i, j) - b[j];
        const double u2 = state.latent(j, i) - mean(j, i);
        natural += scale * (u2 - rho * u1);
      }
      const double precision = 1.0 / sigma_bb + (n - 1) * scale;
      b[i] = state.rng.normal(natural / precision, std::sqrt(1.0 / precision));
    }
    rebalance(state);
    return;
  }

  const Eigen::Matrix2d sigma_inv = state.params.sigma_ab.inverse();
  Eigen::Matrix2d omega_inv;
  omega_inv << scale, -rho * scale, -rho * scale, scale;

  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d sum_u = Eigen::Vector2d::Zero();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      sum_u[0] += state.latent(i, j) - mean(i, j) - b[j];
      sum_u[1] += state.latent(j, i) - mean(j, i) - a[j];
    }
    const Eigen::Matrix2d precision = sigma_inv + (n - 1) * omega_inv;
    const Eigen::Vector2d natural = omega_inv * sum_u;
    const Eigen::LLT<Eigen::Matrix2d> llt(precision);
    const Eigen::Vector2d mean_ab = llt.solve(natural);
    const Eigen::Vector2d z(state.rng.normal(), state.rng.normal());
    const Eigen::Vector2d ab =
        mean_ab + llt.matrixU().solve(z);  // U^{-1} z ~ N(0, precision^{-1})
    a[i] = ab[0];
    b[i] = ab[1];
  }
  rebalance(state);
}

void GibbsSampler::update_sigma_ab(ChainState& state) const {
  const int n = scores_.n();
  if (n < 2) throw ValidationError("effect covariance update needs >= 2 nodes");
  const double df = config_.prior_sigma_df + n;

  if (config_.family == LikelihoodFamily::Rank) {
    double ss = config_.prior_sigma_scale(1, 1);
    for (int i = 0; i < n; ++i) ss += state.params.b[i] * state.params.b[i];
    state.params.sigma_ab = Eigen::Matrix2d::Identity();
    state.params.sigma_ab(1, 1) = inverse_wishart_1x1(df, ss, state.rng);
    return;
  }

  Eigen::Matrix2d ss = config_.prior_sigma_scale;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d ab(state.params.a[i], state.params.b[i]);
    ss.noalias() += ab * ab.transpose();
  }
  state.params.sigma_ab = inverse_wishart_2x2(df, ss, state.rng);
}

void GibbsSampler::update_rho(ChainState& state) const {
  if (config_.rho_proposal_sd == 0.0) return;
  const int n = scores_.n();

  Grid<double> mu(n, 0.0);
  mean_with_effects(state.params, mu);

  // dyad-pair sufficient statistics of the residuals
  double quad = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double e_ij = state.latent(i, j) - mu(i, j);
      const double e_ji = state.latent(j, i) - mu(j, i);
      quad += e_ij * e_ij + e_ji * e_ji;
      cross += e_ij * e_ji;
    }
  const double n_dyads = 0.5 * n * (n - 1);

  auto log_lik = [&](double rho) {
    const double one_minus = 1.0 - rho * rho;
    return -0.5 * n_dyads * std::log(one_minus) -
           (quad - 2.0 * rho * cross) / (2.0 * one_minus);
  };

  const double rho = state.params.rho;
  const double z = std::atanh(rho);
  const double z_prop = z + config_.rho_proposal_sd * state.rng.normal();
  const double rho_prop = std::tanh(z_prop);

  // flat prior on rho; the atanh reparameterization contributes 1 - rho^2
  const double log_accept = log_lik(rho_prop) - log_lik(rho) +
                            std::log1p(-rho_prop * rho_prop) -
                            std::log1p(-rho * rho);
  ++state.rho_proposals;
  if (std::log(state.rng.uniform_pos()) < log_accept) {
    state.params.rho = rho_prop;
    ++state.rho_accepts;
  }
}

void GibbsSampler::sweep(ChainState& state) const {
  update_y(state);
  update_row_levels(state);
  update_beta(state);
  if (config_.sample_effects) update_effects(state);
  if (config_.sample_sigma_ab) update_sigma_ab(state);
  if (config_.sample_rho) update_rho(state);
  ++state.iteration;
}

SrmParams GibbsSampler::draw_prior_params(Rng& rng) const {
  const int n = scores_.n();
  SrmParams params = SrmParams::zero(n, design_.p());
  const double beta_sd = std::sqrt(config_.prior_beta_variance);
  for (int k = 0; k < params.beta.size(); ++k) params.beta[k] = rng.normal(0.0, beta_sd);
  params.rho = config_.sample_rho ? 2.0 * rng.uniform_pos() - 1.0 : 0.0;

  if (config_.family == LikelihoodFamily::Rank) {
    params.sigma_ab = Eigen::Matrix2d::Identity();
    params.sigma_ab(1, 1) = inverse_wishart_1x1(config_.prior_sigma_df,
                                                config_.prior_sigma_scale(1, 1), rng);
    const double sd_b = std::sqrt(params.sigma_ab(1, 1));
    for (int i = 0; i < n; ++i) params.b[i] = rng.normal(0.0, sd_b);
    return params;
  }

  params.sigma_ab =
      inverse_wishart_2x2(config_.prior_sigma_df, config_.prior_sigma_scale, rng);
  const Eigen::Matrix2d chol = params.sigma_ab.llt().matrixL();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d ab = chol * Eigen::Vector2d(rng.normal(), rng.normal());
    params.a[i] = ab[0];
    params.b[i] = ab[1];
  }
  return params;
}

PosteriorSample run_chain(const ScoreMatrix& scores, const DesignData& design,
                          const SamplerConfig& config) {
  const GibbsSampler sampler(scores, design, config);
  ChainState state = sampler.initial_state();

  std::vector<std::string> names = design.parameter_names();
  if (config.family == LikelihoodFamily::Rank) {
    names.emplace_back("sigma_bb");
  } else {
    names.emplace_back("sigma_aa");
    names.emplace_back("sigma_ab");
    names.emplace_back("sigma_bb");
  }
  names.emplace_back("rho");

  const std::int64_t saved_rows = (config.n_iter - config.burn_in) / config.thin;
  PosteriorSample sample;
  sample.names = names;
  sample.draws.resize(saved_rows, names.size());

  std::int64_t row = 0;
  std::int64_t membership_checks = 0, membership_failures = 0;
  for (std::int64_t t = 1; t <= config.n_iter; ++t) {
    sampler.sweep(state);
    const bool save = t > config.burn_in && (t - config.burn_in) % config.thin == 0;
    if (save || config.validate_each_sweep) {
      ++membership_checks;
      if (!validate_membership(scores, state.latent, config.family).member)
        ++membership_failures;
    }
    if (!save || row >= saved_rows) continue;
    int k = 0;
    for (int c = 0; c < state.params.beta.size(); ++c)
      sample.draws(row, k++) = state.params.beta[c];
    if (config.family == LikelihoodFamily::Rank) {
      sample.draws(row, k++) = state.params.sigma_ab(1, 1);
    } else {
      sample.draws(row, k++) = state.params.sigma_ab(0, 0);
      sample.draws(row, k++) = state.params.sigma_ab(0, 1);
      sample.draws(row, k++) = state.params.sigma_ab(1, 1);
    }
    sample.draws(row, k++) = state.params.rho;
    ++row;
  }

  sample.meta["family"] = to_string(config.family);
  sample.meta["seed"] = std::to_string(config.seed);
  sample.meta["n_iter"] = std::to_string(config.n_iter);
  sample.meta["burn_in"] = std::to_string(config.burn_in);
  sample.meta["thin"] = std::to_string(config.thin);
  sample.meta["membership_checks"] = std::to_string(membership_checks);
  sample.meta["membership_failures"] = std::to_string(membership_failures);
  sample.meta["rho_accept_rate"] =
      std::to_string(state.rho_proposals == 0
                         ? 0.0
                         : static_cast<double>(state.rho_accepts) /
                               static_cast<double>(state.rho_proposals));
  return sample;
}

}  // namespace frn
