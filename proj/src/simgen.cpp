#include "frn/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

namespace frn {

void ScenarioSpec::validate() const {
  if (n < 2) throw ValidationError("scenario needs n >= 2");
  if (m < 1 || m > n - 1) throw ValidationError("scenario needs 1 <= m <= n-1");
  if (beta_true.size() != 5)
    throw ValidationError("scenario beta has layout [intercept,row,col,dyad1,dyad2]");
  if (replicates < 1) throw ValidationError("scenario needs replicates >= 1");
}

LatentMatrix simulate_latent(const DesignData& design, const SrmParams& params,
                             Rng& rng) {
  const int n = design.n();
  Grid<double> mean(n, 0.0);
  design.mean_matrix(params.beta, mean);

  LatentMatrix y(n);
  const double rho = params.rho;
  const double resid_sd = std::sqrt(1.0 - rho * rho);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      const double e_ij = z1;
      const double e_ji = rho * z1 + resid_sd * z2;
      y(i, j) = mean(i, j) + params.a[i] + params.b[j] + e_ij;
      y(j, i) = mean(j, i) + params.a[j] + params.b[i] + e_ji;
    }
  }
  return y;
}

SimulatedNetwork simulate_srm(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  const int n = spec.n;

  DesignData design(n, true);
  Eigen::VectorXd xr(n), xc(n);
  for (int i = 0; i < n; ++i) xr[i] = rng.normal();
  for (int i = 0; i < n; ++i) xc[i] = rng.normal();
  design.add_row_covariate("xr", xr);
  design.add_col_covariate("xc", xc);

  Grid<double> xd1(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) xd1(i, j) = rng.normal();
  design.add_dyad_covariate("xd1", std::move(xd1));

  // group co-membership indicator, scaled to roughly unit sd
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.uniform() < 0.5 ? 1.0 : 0.0;
  Grid<double> xd2(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) xd2(i, j) = z[i] * z[j] / 0.42;
  design.add_dyad_covariate("xd2", std::move(xd2));

  SrmParams truth = SrmParams::zero(n, design.p());
  truth.beta = spec.beta_true;
  truth.sigma_ab = spec.sigma_ab_true;
  truth.rho = spec.rho_true;
  const Eigen::Matrix2d chol = spec.sigma_ab_true.llt().matrixL();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d ab = chol * Eigen::Vector2d(rng.normal(), rng.normal());
    truth.a[i] = ab[0];
    truth.b[i] = ab[1];
  }

  SimulatedNetwork out{simulate_latent(design, truth, rng), std::move(design),
                       std::move(truth)};
  return out;
}

ScoreMatrix frn_transform(const LatentMatrix& y, const std::vector<int>& m_per_row) {
  const int n = y.n();
  ScoreMatrix s(n, m_per_row);
  std::vector<std::pair<double, int>> row;
  row.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) row.emplace_back(y(i, j), j);
    // strongest first; ties resolved by column index
    std::sort(row.begin(), row.end(), [](const auto& l, const auto& r) {
      if (l.first != r.first) return l.first > r.first;
      return l.second < r.second;
    });
    const int m = m_per_row[i];
    for (int k = 0; k < static_cast<int>(row.size()); ++k) {
      const int score = std::max(m - k, 0);  // rank k+1 -> m - rank + 1
      s.set_score(i, row[k].second, row[k].first > 0.0 ? score : 0);
    }
  }
  return s;
}

ScoreMatrix frn_transform(const LatentMatrix& y, int m) {
  return frn_transform(y, std::vector<int>(y.n(), m));
}

double censoring_rate(const LatentMatrix& y, int m) {
  const int n = y.n();
  int censored = 0;
  for (int i = 0; i < n; ++i) {
    int positive = 0;
    for (int j = 0; j < n; ++j)
      if (j != i && y(i, j) > 0.0) ++positive;
    if (positive > m) ++censored;
  }
  return static_cast<double>(censored) / n;
}

double solve_intercept_for_mean_outdegree(const ScenarioSpec& base, double target,
                                          std::uint64_t seed, int mc_samples) {
  base.validate();
  // y minus its intercept, sampled once and reused across bisection steps
  Rng rng(seed);
  const Eigen::Matrix2d chol = base.sigma_ab_true.llt().matrixL();
  std::vector<double> rest(mc_samples);
  for (int k = 0; k < mc_samples; ++k) {
    const double xr = rng.normal();
    const double xc = rng.normal();
    const double xd1 = rng.normal();
    const double zi = rng.uniform() < 0.5 ? 1.0 : 0.0;
    const double zj = rng.uniform() < 0.5 ? 1.0 : 0.0;
    const double xd2 = zi * zj / 0.42;
    const double ai = chol(0, 0) * rng.normal();
    const Eigen::Vector2d bj = chol * Eigen::Vector2d(rng.normal(), rng.normal());
    const double eps = rng.normal();
    rest[k] = base.beta_true[1] * xr + base.beta_true[2] * xc +
              base.beta_true[3] * xd1 + base.beta_true[4] * xd2 + ai + bj[1] + eps;
  }
  const double target_frac = target / (base.n - 1);
  auto mean_outdegree_frac = [&](double beta0) {
    int count = 0;
    for (double r : rest)
      if (r + beta0 > 0.0) ++count;
    return static_cast<double>(count) / mc_samples;
  };
  double lo = -12.0, hi = 6.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_outdegree_frac(mid) < target_frac)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<ScenarioSpec> scenario_presets() {
  ScenarioSpec base;
  base.n = 100;
  base.beta_true = Eigen::VectorXd::Ones(5);
  base.beta_true[0] = -3.26;
  base.sigma_ab_true << 1.0, 0.5, 0.5, 1.0;
  base.rho_true = 0.9;
  base.replicates = 8;

  std::vector<ScenarioSpec> out;
  int preset_index = 0;
  for (int m : {5, 15}) {
    ScenarioSpec spec = base;
    spec.m = m;
    spec.label = "fixed_intercept_m" + std::to_string(m);
    spec.seed = derive_seed(0xf17ed, preset_index++);
    out.push_back(std::move(spec));
  }
  for (int m : {5, 15, 30, 50}) {
    ScenarioSpec spec = base;
    spec.m = m;
    spec.label = "matched_outdegree_m" + std::to_string(m);
    spec.seed = derive_seed(0xf17ed, preset_index++);
    spec.beta_true[0] = solve_intercept_for_mean_outdegree(spec, m);
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace frn
