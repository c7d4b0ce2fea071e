#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frn/types.hpp"

namespace frn {

/// Saved MCMC draws, one row per saved iteration, one column per parameter.
/// meta carries family, seed, scenario id and chain diagnostics as strings.
struct PosteriorSample {
  std::vector<std::string> names;
  Eigen::MatrixXd draws;
  std::map<std::string, std::string> meta;

  int index_of(const std::string& name) const;  // -1 when absent
  Eigen::VectorXd column(const std::string& name) const;
};

struct QuantileTable {
  std::vector<std::string> names;
  std::vector<double> levels;
  Eigen::MatrixXd values;  // names x levels

  double at(const std::string& name, double level) const;
};

/// Empirical per-parameter quantiles, linear interpolation between order
/// statistics.
QuantileTable quantile_intervals(const PosteriorSample& sample,
                                 const std::vector<double>& levels = {0.025, 0.5,
                                                                      0.975});

/// Effective sample size via initial-positive-sequence truncation of the
/// autocorrelation sum.  A degenerate (zero-variance) column reports 0.
std::vector<double> effective_sample_size(const PosteriorSample& sample);

/// Per-parameter ratio of posterior mean squared deviations from the true
/// value: E[(theta - truth)^2 | ref] / E[(theta - truth)^2 | alt], for every
/// parameter present in both samples and in `truth`.
std::map<std::string, double> concentration_ratio(
    const PosteriorSample& ref, const PosteriorSample& alt,
    const std::map<std::string, double>& truth);

enum class EffectGroup { Intercept, Row, Column, MeanZeroDyadic, OtherDyadic };
inline constexpr int kEffectGroupCount = 5;
const char* to_string(EffectGroup group);

/// Group a coefficient by its name prefix; dyadic coefficients named in
/// `mean_zero_dyadic` fall in the mean-zero group, other dyadic ones in the
/// catch-all group.  Non-regression parameters return nothing.
std::optional<EffectGroup> classify_parameter(
    const std::string& name, const std::vector<std::string>& mean_zero_dyadic);

struct ComparisonRow {
  std::string family;  // label of the alternative sample set
  std::array<std::optional<double>, kEffectGroupCount> magnitude_ratio;
  std::array<std::optional<double>, kEffectGroupCount> width_ratio;
};

/// Per effect group, geometric mean across datasets and parameters of
/// |median_ref| / |median_alt| and interval-width ratios.  Parameters absent
/// from an alternative sample contribute nothing; groups with no contributing
/// parameter report empty cells.
std::vector<ComparisonRow> comparison_table(
    const std::vector<PosteriorSample>& ref,
    const std::vector<std::pair<std::string, std::vector<PosteriorSample>>>& alts,
    const std::map<std::string, EffectGroup>& grouping);

// --- CSV surface ------------------------------------------------------------

void write_sample_csv(const PosteriorSample& sample, const std::string& path);
PosteriorSample read_sample_csv(const std::string& path);

/// Quantiles plus effective sample size per parameter.
void write_summary_csv(const PosteriorSample& sample, const std::string& path);

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::string& path);

}  // namespace frn
