#include "frn/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "frn/rng.hpp"

namespace frn {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    if (!have_header) {
      header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != header.size())
      throw ValidationError(path + ": row has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(header.size()));
    rows.push_back(std::move(fields));
  }
  if (!have_header) throw ValidationError(path + ": missing header row");
  return rows;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where + ": cannot parse number '" + s + "'");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int SurveyDataset::index_of(const std::string& id) const {
  for (int i = 0; i < n(); ++i)
    if (node_ids[i] == id) return i;
  return -1;
}

SurveyDataset load_dataset(const DatasetPaths& paths, int m) {
  if (m < 1) throw ValidationError("nomination cap m must be positive");
  SurveyDataset ds;
  ds.m = m;

  std::vector<std::string> header;
  const auto roster_rows = read_csv(paths.roster, header);
  if (header.size() < 2 || header[0] != "node_id" || header[1] != "participated")
    throw ValidationError(paths.roster + ": expected header node_id,participated");
  std::unordered_map<std::string, int> index;
  for (const auto& row : roster_rows) {
    if (index.count(row[0]))
      throw ValidationError(paths.roster + ": duplicate node id " + row[0]);
    index[row[0]] = ds.n();
    ds.node_ids.push_back(row[0]);
    if (row[1] != "0" && row[1] != "1")
      throw ValidationError(paths.roster + ": participated must be 0 or 1");
    ds.participated.push_back(row[1] == "1");
  }
  if (ds.n() < 2) throw ValidationError(paths.roster + ": need at least two nodes");

  const auto nom_rows = read_csv(paths.nominations, header);
  if (header.size() != 3 || header[0] != "nominator_id" || header[1] != "nominee_id" ||
      header[2] != "rank")
    throw ValidationError(paths.nominations +
                          ": expected header nominator_id,nominee_id,rank");
  for (const auto& row : nom_rows) {
    Nomination nom;
    const auto it = index.find(row[0]);
    if (it == index.end())
      throw ValidationError(paths.nominations + ": nominator '" + row[0] +
                            "' is not on the roster");
    nom.nominator = it->second;
    if (!ds.participated[nom.nominator])
      throw ValidationError(paths.nominations + ": nominator '" + row[0] +
                            "' is marked as a non-participant");
    if (row[1] == "*") {
      nom.nominee = kOutOfSurvey;
    } else {
      const auto jt = index.find(row[1]);
      if (jt == index.end())
        throw ValidationError(paths.nominations + ": nominee '" + row[1] +
                              "' is not on the roster (use '*' for out-of-survey)");
      nom.nominee = jt->second;
      if (nom.nominee == nom.nominator)
        throw ValidationError(paths.nominations + ": self-nomination by '" + row[0] +
                              "'");
    }
    nom.rank = static_cast<int>(parse_double(row[2], paths.nominations));
    if (nom.rank < 1)
      throw ValidationError(paths.nominations + ": rank must be >= 1");
    ds.nominations.push_back(nom);
  }

  // per-nominator rank positions must be 1..k, no duplicates, no gaps
  std::vector<std::vector<int>> ranks(ds.n());
  std::vector<std::vector<int>> nominees(ds.n());
  for (const auto& nom : ds.nominations) {
    ranks[nom.nominator].push_back(nom.rank);
    if (nom.nominee != kOutOfSurvey) nominees[nom.nominator].push_back(nom.nominee);
  }
  for (int i = 0; i < ds.n(); ++i) {
    auto r = ranks[i];
    std::sort(r.begin(), r.end());
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k] != static_cast<int>(k) + 1)
        throw ValidationError("nominator '" + ds.node_ids[i] +
                              "': rank positions must be exactly 1.." +
                              std::to_string(r.size()) + " with no gaps or duplicates");
    }
    auto nn = nominees[i];
    std::sort(nn.begin(), nn.end());
    if (std::adjacent_find(nn.begin(), nn.end()) != nn.end())
      throw ValidationError("nominator '" + ds.node_ids[i] +
                            "': duplicate nominee row");
    if (static_cast<int>(r.size()) > ds.m)
      throw ValidationError("nominator '" + ds.node_ids[i] + "' made " +
                            std::to_string(r.size()) + " nominations, cap is " +
                            std::to_string(ds.m));
  }

  if (!paths.node_covariates.empty()) {
    const auto rows = read_csv(paths.node_covariates, header);
    if (header.empty() || header[0] != "node_id")
      throw ValidationError(paths.node_covariates + ": first column must be node_id");
    std::vector<std::vector<double>> values(header.size() - 1,
                                            std::vector<double>(ds.n(), kInf));
    for (const auto& row : rows) {
      const auto it = index.find(row[0]);
      if (it == index.end())
        throw ValidationError(paths.node_covariates + ": unknown node id " + row[0]);
      for (std::size_t c = 1; c < header.size(); ++c)
        values[c - 1][it->second] = parse_double(row[c], paths.node_covariates);
    }
    for (std::size_t c = 1; c < header.size(); ++c) {
      for (int i = 0; i < ds.n(); ++i)
        if (values[c - 1][i] == kInf)
          throw ValidationError(paths.node_covariates + ": node '" + ds.node_ids[i] +
                                "' is missing covariate '" + header[c] +
                                "' (missing covariates are rejected, not imputed)");
      ds.node_covariates[header[c]] = values[c - 1];
    }
  }

  if (!paths.dyad_covariates.empty()) {
    const auto rows = read_csv(paths.dyad_covariates, header);
    if (header.size() < 3 || header[0] != "i" || header[1] != "j")
      throw ValidationError(paths.dyad_covariates + ": expected header i,j,<name>...");
    std::vector<Grid<double>> grids(header.size() - 2, Grid<double>(ds.n(), kInf));
    for (const auto& row : rows) {
      const auto it = index.find(row[0]);
      const auto jt = index.find(row[1]);
      if (it == index.end() || jt == index.end())
        throw ValidationError(paths.dyad_covariates + ": unknown node id in row");
      if (it->second == jt->second)
        throw ValidationError(paths.dyad_covariates + ": diagonal entry for " + row[0]);
      for (std::size_t c = 2; c < header.size(); ++c)
        grids[c - 2](it->second, jt->second) = parse_double(row[c], paths.dyad_covariates);
    }
    for (std::size_t c = 2; c < header.size(); ++c) {
      for (int i = 0; i < ds.n(); ++i)
        for (int j = 0; j < ds.n(); ++j)
          if (i != j && grids[c - 2](i, j) == kInf)
            throw ValidationError(paths.dyad_covariates + ": pair (" + ds.node_ids[i] +
                                  "," + ds.node_ids[j] + ") is missing covariate '" +
                                  header[c] + "'");
      ds.dyad_covariates[header[c]] = std::move(grids[c - 2]);
    }
  }
  return ds;
}

ScoreMatrix build_score_matrix(const SurveyDataset& ds) {
  const int n = ds.n();
  std::vector<int> out_of_survey(n, 0);
  std::vector<std::vector<std::pair<int, int>>> in_survey(n);  // (rank, nominee)
  for (const auto& nom : ds.nominations) {
    if (nom.nominee == kOutOfSurvey)
      ++out_of_survey[nom.nominator];
    else
      in_survey[nom.nominator].emplace_back(nom.rank, nom.nominee);
  }

  std::vector<int> caps(n, ds.m);
  for (int i = 0; i < n; ++i) {
    caps[i] = ds.m - out_of_survey[i];
    if (caps[i] < 0)
      throw ValidationError("nominator '" + ds.node_ids[i] +
                            "' has more out-of-survey nominations than the cap");
    if (static_cast<int>(in_survey[i].size()) > caps[i])
      throw ValidationError("nominator '" + ds.node_ids[i] + "' lists " +
                            std::to_string(in_survey[i].size()) +
                            " within-survey nominations but only " +
                            std::to_string(caps[i]) + " remain after out-of-survey ones");
  }

  ScoreMatrix s(n, caps);
  for (int i = 0; i < n; ++i) {
    if (!ds.participated[i]) {
      s.set_row_missing(i);
      continue;
    }
    // the k-th most favored within-survey nominee gets score m_i - k + 1
    auto row = in_survey[i];
    std::sort(row.begin(), row.end());
    for (std::size_t k = 0; k < row.size(); ++k)
      s.set_score(i, row[k].second, caps[i] - static_cast<int>(k));
  }
  s.validate();
  return s;
}

std::vector<double> normal_score_transform(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw ValidationError("normal score transform needs n >= 2");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int l, int r) { return values[l] < values[r]; });
  std::vector<double> out(n);
  int k = 0;
  while (k < n) {
    int k2 = k;
    while (k2 + 1 < n && values[order[k2 + 1]] == values[order[k]]) ++k2;
    const double mid_rank = 0.5 * (k + k2) + 1.0;  // ties share the mid-rank
    const double z = norm_quantile(mid_rank / (n + 1));
    for (int t = k; t <= k2; ++t) out[order[t]] = z;
    k = k2 + 1;
  }
  return out;
}

void write_truth_csv(const std::string& path,
                     const std::map<std::string, double>& truth) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "parameter,value\n";
  for (const auto& [name, value] : truth) out << name << "," << format_double(value) << "\n";
}

std::map<std::string, double> read_truth_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_csv(path, header);
  if (header.size() != 2 || header[0] != "parameter")
    throw ValidationError(path + ": expected header parameter,value");
  std::map<std::string, double> truth;
  for (const auto& row : rows) truth[row[0]] = parse_double(row[1], path);
  return truth;
}

void write_dataset_csv(const std::string& dir, const ScoreMatrix& scores,
                       const DesignData& design,
                       const std::map<std::string, double>& truth) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const int n = scores.n();

  {
    std::ofstream out(dir + "/roster.csv");
    out << "node_id,participated\n";
    for (int i = 0; i < n; ++i) out << "v" << i << ",1\n";
  }
  {
    std::ofstream out(dir + "/nominations.csv");
    out << "nominator_id,nominee_id,rank\n";
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, int>> ranked;  // (score, col)
      for (int j = 0; j < n; ++j)
        if (j != i && scores.score(i, j) > 0) ranked.emplace_back(scores.score(i, j), j);
      std::sort(ranked.rbegin(), ranked.rend());
      for (std::size_t k = 0; k < ranked.size(); ++k)
        out << "v" << i << ",v" << ranked[k].second << "," << (k + 1) << "\n";
    }
  }
  {
    std::ofstream out(dir + "/node_covariates.csv");
    out << "node_id";
    const auto& xr = design.x_row();
    const auto& xc = design.x_col();
    for (const auto& name : design.row_names()) out << "," << name;
    for (const auto& name : design.col_names()) out << "," << name;
    out << "\n";
    for (int i = 0; i < n; ++i) {
      out << "v" << i;
      for (int c = 0; c < xr.cols(); ++c) out << "," << format_double(xr(i, c));
      for (int c = 0; c < xc.cols(); ++c) out << "," << format_double(xc(i, c));
      out << "\n";
    }
  }
  {
    std::ofstream out(dir + "/dyad_covariates.csv");
    out << "i,j";
    const int first = design.has_intercept() ? 1 : 0;
    const int slices = static_cast<int>(design.x_dyad().size());
    for (int s = first; s < slices; ++s) out << "," << design.dyad_names()[s];
    out << "\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        out << "v" << i << ",v" << j;
        for (int s = first; s < slices; ++s)
          out << "," << format_double(design.x_dyad()[s](i, j));
        out << "\n";
      }
  }
  write_truth_csv(dir + "/truth.csv", truth);
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line is not key=value: " + t);
    cfg.values_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("config key '" + key + "' is required");
  return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t Config::require_int(const std::string& key) const {
  return static_cast<std::int64_t>(parse_double(get(key), "config key " + key));
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  return require_int(key);
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return parse_double(get(key), "config key " + key);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ValidationError("config key '" + key + "' must be boolean");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  if (!has(key)) return out;
  std::istringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace frn
