#include "frn/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frn {

std::string to_string(LikelihoodFamily family) {
  switch (family) {
    case LikelihoodFamily::Frn: return "frn";
    case LikelihoodFamily::Rank: return "rank";
    case LikelihoodFamily::Binary: return "binary";
    case LikelihoodFamily::CensoredBinary: return "censored_binary";
  }
  return "?";
}

LikelihoodFamily family_from_string(const std::string& name) {
  if (name == "frn") return LikelihoodFamily::Frn;
  if (name == "rank") return LikelihoodFamily::Rank;
  if (name == "binary") return LikelihoodFamily::Binary;
  if (name == "censored_binary") return LikelihoodFamily::CensoredBinary;
  throw ValidationError("unknown likelihood family '" + name +
                        "' (expected frn, rank, binary or censored_binary)");
}

ScoreMatrix::ScoreMatrix(int n, int m) : ScoreMatrix(n, std::vector<int>(n, m)) {}

ScoreMatrix::ScoreMatrix(int n, std::vector<int> m_per_row)
    : scores_(n, 0), m_(std::move(m_per_row)) {
  if (static_cast<int>(m_.size()) != n)
    throw ValidationError("max_nominations length does not match node count");
  for (int mi : m_)
    if (mi < 0) throw ValidationError("negative nomination cap");
}

void ScoreMatrix::set_row_missing(int i) {
  for (int j = 0; j < n(); ++j)
    if (j != i) scores_(i, j) = kMissingScore;
}

void ScoreMatrix::validate() const {
  const int nn = n();
  for (int i = 0; i < nn; ++i) {
    std::vector<int> positive;
    for (int j = 0; j < nn; ++j) {
      if (j == i) continue;
      const int s = scores_(i, j);
      if (s == kMissingScore) continue;
      if (s < 0)
        throw ValidationError("row " + std::to_string(i) + ": negative score");
      if (s > 0) positive.push_back(s);
    }
    const int d = static_cast<int>(positive.size());
    if (d > m_[i])
      throw ValidationError("row " + std::to_string(i) + ": outdegree " +
                            std::to_string(d) + " exceeds cap " +
                            std::to_string(m_[i]));
    std::sort(positive.begin(), positive.end());
    for (int k = 0; k < d; ++k) {
      const int expected = m_[i] - d + 1 + k;
      if (positive[k] != expected)
        throw ValidationError("row " + std::to_string(i) +
                              ": scores are not the canonical set {m-d+1..m}");
    }
  }
}

ScoreMatrix canonicalize_scores(const Grid<int>& raw,
                                const std::vector<int>& m_per_row,
                                ScoreInput kind) {
  const int n = raw.n();
  if (static_cast<int>(m_per_row.size()) != n)
    throw ValidationError("m_per_row length does not match grid size");
  ScoreMatrix out(n, m_per_row);

  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, int>> entries;  // (value, column)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const int v = raw(i, j);
      if (v == kMissingScore) {
        out.set_score(i, j, kMissingScore);
        continue;
      }
      if (v < 0)
        throw ValidationError("row " + std::to_string(i) + ": negative entry");
      if (v > 0) entries.emplace_back(v, j);
    }
    const int d = static_cast<int>(entries.size());
    const int m = m_per_row[i];
    if (d > m)
      throw ValidationError("row " + std::to_string(i) + ": " +
                            std::to_string(d) + " nominations exceed cap " +
                            std::to_string(m));
    std::sort(entries.begin(), entries.end());
    for (int k = 0; k + 1 < d; ++k)
      if (entries[k].first == entries[k + 1].first)
        throw ValidationError("row " + std::to_string(i) +
                              ": duplicate nomination value " +
                              std::to_string(entries[k].first));
    if (kind == ScoreInput::RankPositions) {
      // values must be exactly the rank positions 1..d, rank 1 = most favored
      for (int k = 0; k < d; ++k)
        if (entries[k].first != k + 1)
          throw ValidationError("row " + std::to_string(i) +
                                ": rank positions must be exactly 1.." +
                                std::to_string(d));
      for (int k = 0; k < d; ++k)  // rank r -> score m - r + 1
        out.set_score(i, entries[k].second, m - entries[k].first + 1);
    } else {
      // order-preserving renumber onto {m-d+1..m}; highest value -> m
      for (int k = 0; k < d; ++k)
        out.set_score(i, entries[k].second, m - d + 1 + k);
    }
  }
  return out;
}

std::vector<int> out_degrees(const ScoreMatrix& s) {
  std::vector<int> d(s.n(), 0);
  for (int i = 0; i < s.n(); ++i)
    for (int j = 0; j < s.n(); ++j)
      if (j != i && s.score(i, j) > 0) ++d[i];
  return d;
}

void LatentMatrix::validate() const {
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (j != i && !std::isfinite(values(i, j)))
        throw ValidationError("latent matrix has a non-finite entry at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
}

DesignData::DesignData(int n, bool intercept) : n_(n), has_intercept_(intercept) {
  x_row_.resize(n, 0);
  x_col_.resize(n, 0);
  if (intercept) {
    x_dyad_.emplace_back(n, 1.0);
    dyad_names_.emplace_back("intercept");
  }
}

void DesignData::add_row_covariate(const std::string& name,
                                   const Eigen::VectorXd& values) {
  if (values.size() != n_) throw ValidationError("row covariate length mismatch");
  x_row_.conservativeResize(n_, x_row_.cols() + 1);
  x_row_.col(x_row_.cols() - 1) = values;
  row_names_.push_back(name);
}

void DesignData::add_col_covariate(const std::string& name,
                                   const Eigen::VectorXd& values) {
  if (values.size() != n_) throw ValidationError("col covariate length mismatch");
  x_col_.conservativeResize(n_, x_col_.cols() + 1);
  x_col_.col(x_col_.cols() - 1) = values;
  col_names_.push_back(name);
}

void DesignData::add_dyad_covariate(const std::string& name, Grid<double> values) {
  if (values.n() != n_) throw ValidationError("dyad covariate size mismatch");
  x_dyad_.push_back(std::move(values));
  dyad_names_.push_back(name);
}

void DesignData::regressor(int i, int j, double* out) const {
  int k = 0;
  if (has_intercept_) out[k++] = 1.0;
  for (int c = 0; c < p_row(); ++c) out[k++] = x_row_(i, c);
  for (int c = 0; c < p_col(); ++c) out[k++] = x_col_(j, c);
  for (int s = has_intercept_ ? 1 : 0; s < static_cast<int>(x_dyad_.size()); ++s)
    out[k++] = x_dyad_[s](i, j);
}

Eigen::VectorXd DesignData::regressor(int i, int j) const {
  Eigen::VectorXd x(p());
  regressor(i, j, x.data());
  return x;
}

void DesignData::mean_matrix(const Eigen::VectorXd& beta, Grid<double>& out) const {
  if (beta.size() != p()) throw ValidationError("beta length mismatch");
  if (out.n() != n_) out = Grid<double>(n_, 0.0);
  int k = 0;
  const double b0 = has_intercept_ ? beta[k++] : 0.0;
  Eigen::VectorXd row_part = Eigen::VectorXd::Constant(n_, b0);
  if (p_row() > 0) row_part += x_row_ * beta.segment(k, p_row());
  k += p_row();
  Eigen::VectorXd col_part = Eigen::VectorXd::Zero(n_);
  if (p_col() > 0) col_part = x_col_ * beta.segment(k, p_col());
  k += p_col();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      out.at_raw(i, j) = row_part[i] + col_part[j];
  for (int s = has_intercept_ ? 1 : 0; s < static_cast<int>(x_dyad_.size()); ++s) {
    const double w = beta[k++];
    const Grid<double>& slice = x_dyad_[s];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        out.at_raw(i, j) += w * slice.at_raw(i, j);
  }
}

std::vector<std::string> DesignData::parameter_names() const {
  std::vector<std::string> names;
  if (has_intercept_) names.push_back("beta_intercept");
  for (const auto& c : row_names_) names.push_back("beta_row_" + c);
  for (const auto& c : col_names_) names.push_back("beta_col_" + c);
  for (std::size_t s = has_intercept_ ? 1 : 0; s < dyad_names_.size(); ++s)
    names.push_back("beta_dyad_" + dyad_names_[s]);
  return names;
}

std::vector<std::string> DesignData::row_constant_dyad_slices() const {
  std::vector<std::string> offenders;
  for (std::size_t s = 0; s < x_dyad_.size(); ++s) {
    bool row_constant = true;
    for (int i = 0; i < n_ && row_constant; ++i) {
      double ref = 0.0;
      bool have_ref = false;
      for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        if (!have_ref) {
          ref = x_dyad_[s](i, j);
          have_ref = true;
        } else if (x_dyad_[s](i, j) != ref) {
          row_constant = false;
          break;
        }
      }
    }
    if (row_constant) offenders.push_back(dyad_names_[s]);
  }
  return offenders;
}

void DesignData::validate() const {
  if (n_ < 2) throw ValidationError("design needs at least two nodes");
  if (!x_row_.allFinite() || !x_col_.allFinite())
    throw ValidationError("node covariates contain non-finite values");
  for (const auto& slice : x_dyad_)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (j != i && !std::isfinite(slice(i, j)))
          throw ValidationError("dyad covariate contains non-finite values");
}

SrmParams SrmParams::zero(int n, int p) {
  SrmParams out;
  out.beta = Eigen::VectorXd::Zero(p);
  out.a = Eigen::VectorXd::Zero(n);
  out.b = Eigen::VectorXd::Zero(n);
  out.sigma_ab = Eigen::Matrix2d::Identity();
  out.rho = 0.0;
  return out;
}

void SrmParams::validate() const {
  if (a.size() != b.size()) throw ValidationError("effect vectors differ in length");
  if (!(rho > -1.0 && rho < 1.0))
    throw ValidationError("rho must lie strictly inside (-1, 1)");
  if (std::fabs(sigma_ab(0, 1) - sigma_ab(1, 0)) > 1e-12)
    throw ValidationError("sigma_ab must be symmetric");
  const double det = sigma_ab(0, 0) * sigma_ab(1, 1) - sigma_ab(0, 1) * sigma_ab(1, 0);
  if (!(sigma_ab(0, 0) > 0.0 && det > 0.0))
    throw ValidationError("sigma_ab must be positive definite");
}

}  // namespace frn
