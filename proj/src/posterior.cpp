#include "frn/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace frn {

int PosteriorSample::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return static_cast<int>(k);
  return -1;
}

Eigen::VectorXd PosteriorSample::column(const std::string& name) const {
  const int k = index_of(name);
  if (k < 0) throw ValidationError("no parameter named '" + name + "' in sample");
  return draws.col(k);
}

double QuantileTable::at(const std::string& name, double level) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name)
      for (std::size_t l = 0; l < levels.size(); ++l)
        if (levels[l] == level) return values(i, l);
  throw ValidationError("quantile lookup failed for '" + name + "'");
}

namespace {

double interpolated_quantile(std::vector<double>& sorted, double level) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = level * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double w = h - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

}  // namespace

QuantileTable quantile_intervals(const PosteriorSample& sample,
                                 const std::vector<double>& levels) {
  if (sample.draws.rows() == 0) throw ValidationError("empty posterior sample");
  QuantileTable table;
  table.names = sample.names;
  table.levels = levels;
  table.values.resize(sample.names.size(), levels.size());
  std::vector<double> col(sample.draws.rows());
  for (int k = 0; k < static_cast<int>(sample.names.size()); ++k) {
    for (int r = 0; r < sample.draws.rows(); ++r) col[r] = sample.draws(r, k);
    std::sort(col.begin(), col.end());
    for (std::size_t l = 0; l < levels.size(); ++l)
      table.values(k, l) = interpolated_quantile(col, levels[l]);
  }
  return table;
}

std::vector<double> effective_sample_size(const PosteriorSample& sample) {
  const int n = static_cast<int>(sample.draws.rows());
  if (n < 100) throw ValidationError("effective sample size needs >= 100 draws");
  std::vector<double> out(sample.names.size(), 0.0);

  for (int k = 0; k < static_cast<int>(sample.names.size()); ++k) {
    const Eigen::VectorXd col = sample.draws.col(k);
    const double mean = col.mean();
    const Eigen::VectorXd centered = col.array() - mean;
    const double c0 = centered.squaredNorm() / n;
    if (!(c0 > 0.0) || c0 < 1e-14 * (1.0 + mean * mean)) {
      out[k] = 0.0;  // degenerate column
      continue;
    }
    // Paired autocorrelations, truncated at the first nonpositive pair sum.
    double tau_sum = 0.0;
    for (int lag = 0; lag + 1 < n; lag += 2) {
      auto acf = [&](int l) {
        if (l >= n) return 0.0;
        double c = 0.0;
        for (int t = 0; t + l < n; ++t) c += centered[t] * centered[t + l];
        return c / (n * c0);
      };
      const double gamma = acf(lag) + acf(lag + 1);
      if (gamma <= 0.0) break;
      tau_sum += gamma;
    }
    const double tau = std::max(1.0, 2.0 * tau_sum - 1.0);
    out[k] = n / tau;
  }
  return out;
}

std::map<std::string, double> concentration_ratio(
    const PosteriorSample& ref, const PosteriorSample& alt,
    const std::map<std::string, double>& truth) {
  std::map<std::string, double> out;
  for (const auto& [name, star] : truth) {
    const int kr = ref.index_of(name);
    const int ka = alt.index_of(name);
    if (kr < 0 || ka < 0) continue;
    const double msd_ref = (ref.draws.col(kr).array() - star).square().mean();
    const double msd_alt = (alt.draws.col(ka).array() - star).square().mean();
    out[name] = msd_ref / msd_alt;
  }
  return out;
}

const char* to_string(EffectGroup group) {
  switch (group) {
    case EffectGroup::Intercept: return "intercept";
    case EffectGroup::Row: return "row";
    case EffectGroup::Column: return "column";
    case EffectGroup::MeanZeroDyadic: return "mean_zero_dyadic";
    case EffectGroup::OtherDyadic: return "other_dyadic";
  }
  return "?";
}

std::optional<EffectGroup> classify_parameter(
    const std::string& name, const std::vector<std::string>& mean_zero_dyadic) {
  if (name == "beta_intercept") return EffectGroup::Intercept;
  if (name.rfind("beta_row_", 0) == 0) return EffectGroup::Row;
  if (name.rfind("beta_col_", 0) == 0) return EffectGroup::Column;
  if (name.rfind("beta_dyad_", 0) == 0) {
    const std::string cov = name.substr(std::string("beta_dyad_").size());
    for (const auto& m : mean_zero_dyadic)
      if (m == cov) return EffectGroup::MeanZeroDyadic;
    return EffectGroup::OtherDyadic;
  }
  return std::nullopt;
}

std::vector<ComparisonRow> comparison_table(
    const std::vector<PosteriorSample>& ref,
    const std::vector<std::pair<std::string, std::vector<PosteriorSample>>>& alts,
    const std::map<std::string, EffectGroup>& grouping) {
  if (ref.empty()) throw ValidationError("comparison needs reference samples");

  std::vector<QuantileTable> ref_q;
  ref_q.reserve(ref.size());
  for (const auto& s : ref) ref_q.push_back(quantile_intervals(s));

  std::vector<ComparisonRow> rows;
  for (const auto& [family, samples] : alts) {
    if (samples.size() != ref.size())
      throw ValidationError("comparison requires one alternative sample per dataset");
    std::array<double, kEffectGroupCount> log_mag{}, log_width{};
    std::array<int, kEffectGroupCount> count{};
    for (std::size_t d = 0; d < samples.size(); ++d) {
      const QuantileTable alt_q = quantile_intervals(samples[d]);
      for (const auto& [name, group] : grouping) {
        if (samples[d].index_of(name) < 0 || ref[d].index_of(name) < 0) continue;
        const int g = static_cast<int>(group);
        const double med_r = ref_q[d].at(name, 0.5);
        const double med_a = alt_q.at(name, 0.5);
        const double wid_r = ref_q[d].at(name, 0.975) - ref_q[d].at(name, 0.025);
        const double wid_a = alt_q.at(name, 0.975) - alt_q.at(name, 0.025);
        if (med_r == 0.0 || med_a == 0.0 || wid_a <= 0.0 || wid_r <= 0.0) continue;
        log_mag[g] += std::log(std::fabs(med_r) / std::fabs(med_a));
        log_width[g] += std::log(wid_r / wid_a);
        ++count[g];
      }
    }
    ComparisonRow row;
    row.family = family;
    for (int g = 0; g < kEffectGroupCount; ++g) {
      if (count[g] == 0) continue;
      row.magnitude_ratio[g] = std::exp(log_mag[g] / count[g]);
      row.width_ratio[g] = std::exp(log_width[g] / count[g]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- CSV surface ------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_sample_csv(const PosteriorSample& sample, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write sample file " + path);
  for (const auto& [key, value] : sample.meta) out << "# " << key << "=" << value << "\n";
  for (std::size_t k = 0; k < sample.names.size(); ++k)
    out << (k ? "," : "") << sample.names[k];
  out << "\n";
  for (int r = 0; r < sample.draws.rows(); ++r) {
    for (int k = 0; k < sample.draws.cols(); ++k)
      out << (k ? "," : "") << format_double(sample.draws(r, k));
    out << "\n";
  }
}

PosteriorSample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read sample file " + path);
  PosteriorSample sample;
  std::string line;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        sample.meta[key] = line.substr(eq + 1);
      }
      continue;
    }
    if (!have_header) {
      sample.names = split(line, ',');
      have_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != sample.names.size())
      throw ValidationError("ragged row in sample file " + path);
    std::vector<double> row(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) row[k] = std::stod(fields[k]);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ValidationError("sample file has no header: " + path);
  sample.draws.resize(rows.size(), sample.names.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < rows[r].size(); ++k)
      sample.draws(r, k) = rows[r][k];
  return sample;
}

void write_summary_csv(const PosteriorSample& sample, const std::string& path) {
  const QuantileTable q = quantile_intervals(sample);
  // the autocorrelation estimator needs a minimum length; short samples get NA
  std::vector<double> ess;
  if (sample.draws.rows() >= 100) ess = effective_sample_size(sample);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write summary file " + path);
  out << "parameter,q2.5,median,q97.5,ess\n";
  for (std::size_t k = 0; k < sample.names.size(); ++k) {
    out << sample.names[k];
    for (int l = 0; l < 3; ++l) out << "," << format_double(q.values(k, l));
    if (ess.empty())
      out << ",NA\n";
    else
      out << "," << format_double(ess[k]) << "\n";
  }
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write comparison file " + path);
  out << "family,group,magnitude_ratio,width_ratio\n";
  for (const auto& row : rows)
    for (int g = 0; g < kEffectGroupCount; ++g) {
      out << row.family << "," << to_string(static_cast<EffectGroup>(g)) << ",";
      out << (row.magnitude_ratio[g] ? format_double(*row.magnitude_ratio[g]) : "NA");
      out << ",";
      out << (row.width_ratio[g] ? format_double(*row.width_ratio[g]) : "NA");
      out << "\n";
    }
}

}  // namespace frn
