#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "frn/grid.hpp"

namespace frn {

/// Bad or inconsistent input data / configuration.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown (empty truncation interval, non-PD accumulation, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMissingScore = -1;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Likelihood families
// ---------------------------------------------------------------------------

/// The four interchangeable set-based likelihoods.  Under Rank the model
/// excludes the intercept, nominator (row) regressors and sender effects:
/// row-constant mean shifts are structurally non-identifiable there.
enum class LikelihoodFamily { Frn, Rank, Binary, CensoredBinary };

std::string to_string(LikelihoodFamily family);
LikelihoodFamily family_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Score matrix
// ---------------------------------------------------------------------------

/// Observed nomination scores.  Entry (i, j) is 0 for "not nominated",
/// kMissingScore for unobserved, or a positive score where within row i the
/// canonical nonzero scores of d nominees are exactly {m_i - d + 1, ..., m_i}
/// (top nominee holds m_i).  Each row i carries its own nomination cap m_i.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(int n, int m);
  ScoreMatrix(int n, std::vector<int> m_per_row);

  int n() const { return scores_.n(); }
  int score(int i, int j) const { return scores_(i, j); }
  void set_score(int i, int j, int s) { scores_(i, j) = s; }
  bool missing(int i, int j) const { return scores_(i, j) == kMissingScore; }
  void set_row_missing(int i);

  int cap(int i) const { return m_[i]; }
  const std::vector<int>& caps() const { return m_; }

  /// Row-score-set invariant: positive scores per row are distinct, form the
  /// canonical run {m_i - d_i + 1, ..., m_i}, and d_i <= m_i.  O(n^2).
  void validate() const;

  bool operator==(const ScoreMatrix&) const = default;

 private:
  Grid<int> scores_;
  std::vector<int> m_;
};

/// How raw nomination numbers are coded on input.
///  - Scores: higher value = more favored (any distinct positive integers).
///  - RankPositions: 1 = most favored, counting down (values exactly 1..d).
enum class ScoreInput { Scores, RankPositions };

/// Renumber raw per-row nomination values onto the canonical score set.
/// Preserves each row's preference order and outdegree.
ScoreMatrix canonicalize_scores(const Grid<int>& raw,
                                const std::vector<int>& m_per_row,
                                ScoreInput kind = ScoreInput::Scores);

/// d_i = number of strictly positive, non-missing entries in row i.
std::vector<int> out_degrees(const ScoreMatrix& s);

// ---------------------------------------------------------------------------
// Latent relations
// ---------------------------------------------------------------------------

/// The unobserved real-valued relations carried as MCMC state.
struct LatentMatrix {
  Grid<double> values;

  LatentMatrix() = default;
  explicit LatentMatrix(int n) : values(n, 0.0) {}

  int n() const { return values.n(); }
  double operator()(int i, int j) const { return values(i, j); }
  double& operator()(int i, int j) { return values(i, j); }

  void validate() const;  // all off-diagonal entries finite
};

// ---------------------------------------------------------------------------
// Regression design
// ---------------------------------------------------------------------------

/// Row-, column- and dyad-specific regressors for the mean model
/// beta^T x_{i,j}.  The intercept is carried as a constant-1 dyad slice
/// (slice 0, named "intercept") so that every coefficient is updated by one
/// uniform GLS step.  Coefficient layout: [intercept][row][col][dyad...].
class DesignData {
 public:
  DesignData() = default;
  DesignData(int n, bool intercept);

  int n() const { return n_; }
  bool has_intercept() const { return has_intercept_; }

  void add_row_covariate(const std::string& name, const Eigen::VectorXd& values);
  void add_col_covariate(const std::string& name, const Eigen::VectorXd& values);
  void add_dyad_covariate(const std::string& name, Grid<double> values);

  int p_row() const { return static_cast<int>(row_names_.size()); }
  int p_col() const { return static_cast<int>(col_names_.size()); }
  int p_dyad() const {  // excludes the intercept slice
    return static_cast<int>(dyad_names_.size()) - (has_intercept_ ? 1 : 0);
  }
  int p() const { return (has_intercept_ ? 1 : 0) + p_row() + p_col() + p_dyad(); }

  const Eigen::MatrixXd& x_row() const { return x_row_; }
  const Eigen::MatrixXd& x_col() const { return x_col_; }
  const std::vector<Grid<double>>& x_dyad() const { return x_dyad_; }
  const std::vector<std::string>& row_names() const { return row_names_; }
  const std::vector<std::string>& col_names() const { return col_names_; }
  const std::vector<std::string>& dyad_names() const { return dyad_names_; }

  /// Fill the length-p regressor vector for the ordered pair (i, j).
  void regressor(int i, int j, double* out) const;
  Eigen::VectorXd regressor(int i, int j) const;

  /// Mean surface: out(i, j) = beta^T x_{i,j} for every ordered pair.
  void mean_matrix(const Eigen::VectorXd& beta, Grid<double>& out) const;

  /// Coefficient names, block prefixes encode the grouping:
  /// beta_intercept, beta_row_<c>, beta_col_<c>, beta_dyad_<c>.
  std::vector<std::string> parameter_names() const;

  /// Dyad slices whose value depends only on the row index (the intercept
  /// slice included).  Such columns act as nominator effects and are not
  /// identifiable under the Rank family.
  std::vector<std::string> row_constant_dyad_slices() const;

  void validate() const;  // dimension consistency, finite entries

 private:
  int n_ = 0;
  bool has_intercept_ = false;
  Eigen::MatrixXd x_row_;  // n x p_row
  Eigen::MatrixXd x_col_;  // n x p_col
  std::vector<Grid<double>> x_dyad_;
  std::vector<std::string> row_names_, col_names_, dyad_names_;
};

// ---------------------------------------------------------------------------
// Model parameters
// ---------------------------------------------------------------------------

/// Social relations regression parameters.  The dyadic error scale is fixed
/// at 1: all four likelihoods are invariant to rescaling the latent matrix,
/// so the scale is not identified (the usual probit normalization).
struct SrmParams {
  Eigen::VectorXd beta;
  Eigen::VectorXd a;  // sender effects
  Eigen::VectorXd b;  // receiver effects
  Eigen::Matrix2d sigma_ab = Eigen::Matrix2d::Identity();
  double rho = 0.0;

  static SrmParams zero(int n, int p);
  void validate() const;  // sigma_ab symmetric PD, rho in (-1, 1)
};

// ---------------------------------------------------------------------------
// Truncation intervals
// ---------------------------------------------------------------------------

/// Per-pair truncation bounds.  Which endpoints are open is never material:
/// boundary ties have probability zero under continuous conditionals and are
/// not special-cased anywhere.
struct ConstraintInterval {
  double lo = -kInf;
  double hi = kInf;

  bool whole_line() const { return lo == -kInf && hi == kInf; }
  bool contains(double y) const { return y >= lo && y <= hi; }
};

}  // namespace frn
