#pragma once

#include <map>
#include <string>
#include <vector>

#include "frn/types.hpp"

namespace frn {

inline constexpr int kOutOfSurvey = -1;

/// One survey answer: nominee is a roster index, or kOutOfSurvey for a
/// nomination pointing outside the surveyed population.  Out-of-survey
/// nominations consume rank slots and lower the nominator's remaining
/// within-survey cap, but create no matrix entry.
struct Nomination {
  int nominator = 0;
  int nominee = kOutOfSurvey;
  int rank = 0;  // 1 = most favored
};

struct SurveyDataset {
  std::vector<std::string> node_ids;
  std::vector<bool> participated;
  std::vector<Nomination> nominations;
  std::map<std::string, std::vector<double>> node_covariates;
  std::map<std::string, Grid<double>> dyad_covariates;
  int m = 0;  // global nomination cap

  int n() const { return static_cast<int>(node_ids.size()); }
  int index_of(const std::string& id) const;  // -1 when absent
};

struct DatasetPaths {
  std::string roster;
  std::string nominations;
  std::string node_covariates;  // optional: empty = none
  std::string dyad_covariates;  // optional: empty = none
};

/// Parse and validate the CSV bundle.  Rank positions per nominator must be
/// 1..k with no gaps or duplicates; nominee ids must be on the roster or '*'.
SurveyDataset load_dataset(const DatasetPaths& paths, int m);

/// Canonical scores from a survey: within-survey nominations of nominator i
/// become scores against the reduced cap m_i = m - (out-of-survey count);
/// rows of non-participants are missing.
ScoreMatrix build_score_matrix(const SurveyDataset& ds);

/// Quantile normal-score transform: the value with mid-rank r among n maps
/// to the standard normal quantile of r / (n + 1); ties share mid-ranks.
std::vector<double> normal_score_transform(const std::vector<double>& values);

/// Write a simulated network as the CSV bundle `fit` consumes, plus the
/// ground-truth parameter table.
void write_dataset_csv(const std::string& dir, const ScoreMatrix& scores,
                       const DesignData& design,
                       const std::map<std::string, double>& truth);

void write_truth_csv(const std::string& path,
                     const std::map<std::string, double>& truth);
std::map<std::string, double> read_truth_csv(const std::string& path);

// --- flat key=value configuration --------------------------------------------

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;  // throws when absent
  std::string get(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::int64_t require_int(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma-split

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace frn
