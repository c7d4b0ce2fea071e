#include "frn/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "frn/io.hpp"
#include "frn/posterior.hpp"
#include "frn/sampler.hpp"
#include "frn/simgen.hpp"

namespace frn {

namespace {

std::map<std::string, double> truth_map(const DesignData& design,
                                        const SrmParams& truth) {
  std::map<std::string, double> out;
  const auto names = design.parameter_names();
  for (std::size_t k = 0; k < names.size(); ++k) out[names[k]] = truth.beta[k];
  out["sigma_aa"] = truth.sigma_ab(0, 0);
  out["sigma_ab"] = truth.sigma_ab(0, 1);
  out["sigma_bb"] = truth.sigma_ab(1, 1);
  out["rho"] = truth.rho;
  return out;
}

int cmd_simulate(const Config& cfg) {
  const std::string out_dir = cfg.get("out_dir");
  std::vector<ScenarioSpec> specs;

  if (cfg.has("preset")) {
    const std::string preset = cfg.get("preset");
    for (auto& spec : scenario_presets())
      if (spec.label.rfind(preset, 0) == 0) specs.push_back(std::move(spec));
    if (specs.empty())
      throw ValidationError("unknown preset '" + preset +
                            "' (expected fixed_intercept or matched_outdegree)");
  } else {
    ScenarioSpec spec;
    spec.n = static_cast<int>(cfg.get_int("n", 100));
    spec.m = static_cast<int>(cfg.require_int("m"));
    spec.replicates = static_cast<int>(cfg.get_int("replicates", 1));
    spec.beta_true.resize(5);
    spec.beta_true << cfg.get_double("beta_intercept", 0.0),
        cfg.get_double("beta_row", 1.0), cfg.get_double("beta_col", 1.0),
        cfg.get_double("beta_dyad1", 1.0), cfg.get_double("beta_dyad2", 1.0);
    spec.sigma_ab_true << cfg.get_double("sigma_aa", 1.0),
        cfg.get_double("sigma_ab", 0.5), cfg.get_double("sigma_ab", 0.5),
        cfg.get_double("sigma_bb", 1.0);
    spec.rho_true = cfg.get_double("rho", 0.9);
    spec.label = cfg.get("label", "scenario");
    specs.push_back(std::move(spec));
  }

  int written = 0;
  for (auto& spec : specs) {
    if (cfg.has("seed")) spec.seed = static_cast<std::uint64_t>(cfg.require_int("seed"));
    for (int rep = 0; rep < spec.replicates; ++rep) {
      Rng rng(derive_seed(spec.seed, rep));
      const SimulatedNetwork net = simulate_srm(spec, rng);
      const ScoreMatrix scores = frn_transform(net.latent, spec.m);
      const std::string dir =
          out_dir + "/" + spec.label + "/rep" + std::to_string(rep);
      write_dataset_csv(dir, scores, net.design, truth_map(net.design, net.truth));
      ++written;
    }
  }
  std::cout << "wrote " << written << " dataset directories under " << out_dir
            << "\n";
  return 0;
}

DesignData design_from_dataset(const SurveyDataset& ds, const Config& cfg,
                               LikelihoodFamily family) {
  const bool default_intercept = family != LikelihoodFamily::Rank;
  DesignData design(ds.n(), cfg.get_bool("intercept", default_intercept));

  std::map<std::string, std::vector<double>> node_cov = ds.node_covariates;
  for (const auto& name : cfg.get_list("normal_score_covariates")) {
    const auto it = node_cov.find(name);
    if (it == node_cov.end())
      throw ValidationError("normal_score_covariates: unknown covariate '" + name + "'");
    it->second = normal_score_transform(it->second);
  }

  auto node_values = [&](const std::string& name) {
    const auto it = node_cov.find(name);
    if (it == node_cov.end())
      throw ValidationError("unknown node covariate '" + name + "'");
    return Eigen::Map<const Eigen::VectorXd>(it->second.data(), ds.n()).eval();
  };
  for (const auto& name : cfg.get_list("row_covariates"))
    design.add_row_covariate(name, node_values(name));
  for (const auto& name : cfg.get_list("col_covariates"))
    design.add_col_covariate(name, node_values(name));
  for (const auto& name : cfg.get_list("dyad_covariates")) {
    const auto it = ds.dyad_covariates.find(name);
    if (it == ds.dyad_covariates.end())
      throw ValidationError("unknown dyad covariate '" + name + "'");
    design.add_dyad_covariate(name, it->second);
  }
  design.validate();
  return design;
}

SamplerConfig sampler_config(const Config& cfg) {
  SamplerConfig config;
  config.family = family_from_string(cfg.get("family", "frn"));
  config.n_iter = cfg.get_int("n_iter", config.n_iter);
  config.burn_in = cfg.get_int("burn_in", config.burn_in);
  config.thin = cfg.get_int("thin", config.thin);
  config.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  config.prior_beta_variance =
      cfg.get_double("prior_beta_variance", config.prior_beta_variance);
  config.prior_sigma_df = cfg.get_double("prior_sigma_df", config.prior_sigma_df);
  config.rho_proposal_sd = cfg.get_double("rho_proposal_sd", config.rho_proposal_sd);
  config.validate();
  return config;
}

int cmd_fit(const Config& cfg) {
  DatasetPaths paths;
  paths.roster = cfg.get("data.roster");
  paths.nominations = cfg.get("data.nominations");
  paths.node_covariates = cfg.get("data.node_covariates", "");
  paths.dyad_covariates = cfg.get("data.dyad_covariates", "");

  const SamplerConfig config = sampler_config(cfg);
  const SurveyDataset ds = load_dataset(paths, static_cast<int>(cfg.require_int("m")));
  const ScoreMatrix scores = build_score_matrix(ds);
  const DesignData design = design_from_dataset(ds, cfg, config.family);

  PosteriorSample sample = run_chain(scores, design, config);
  sample.meta["scenario"] = cfg.get("label", "unnamed");

  write_sample_csv(sample, cfg.get("out.samples"));
  if (cfg.has("out.summary")) write_summary_csv(sample, cfg.get("out.summary"));
  std::cout << "fit " << to_string(config.family) << ": " << sample.draws.rows()
            << " saved draws, " << sample.names.size() << " parameters\n";
  return 0;
}

int cmd_summarize(const Config& cfg) {
  const PosteriorSample sample = read_sample_csv(cfg.get("sample"));
  write_summary_csv(sample, cfg.get("out"));
  std::cout << "summarized " << sample.draws.rows() << " draws\n";
  return 0;
}

int cmd_compare(const Config& cfg) {
  const auto ref_paths = cfg.get_list("ref_samples");
  const auto alt_paths = cfg.get_list("alt_samples");
  if (ref_paths.empty() || ref_paths.size() != alt_paths.size())
    throw ValidationError("compare needs matched ref_samples and alt_samples lists");

  std::vector<PosteriorSample> refs, alts;
  for (const auto& p : ref_paths) refs.push_back(read_sample_csv(p));
  for (const auto& p : alt_paths) alts.push_back(read_sample_csv(p));

  const auto mean_zero = cfg.get_list("mean_zero_dyadic");
  std::map<std::string, EffectGroup> grouping;
  for (const auto& sample : refs)
    for (const auto& name : sample.names)
      if (const auto group = classify_parameter(name, mean_zero))
        grouping[name] = *group;

  std::string alt_label = cfg.get("alt_family", "");
  if (alt_label.empty())
    alt_label = alts.front().meta.count("family") ? alts.front().meta.at("family")
                                                  : "alt";

  const auto table = comparison_table(refs, {{alt_label, alts}}, grouping);
  write_comparison_csv(table, cfg.get("out.table"));

  if (cfg.has("truth") && cfg.has("out.concentration")) {
    const auto truth = read_truth_csv(cfg.get("truth"));
    std::map<std::string, double> sum;
    std::map<std::string, int> count;
    for (std::size_t d = 0; d < refs.size(); ++d)
      for (const auto& [name, ratio] : concentration_ratio(refs[d], alts[d], truth)) {
        sum[name] += ratio;
        ++count[name];
      }
    std::ofstream out(cfg.get("out.concentration"));
    if (!out) throw ValidationError("cannot write " + cfg.get("out.concentration"));
    // series_x labels the invocation (say, the nomination cap) so several
    // runs concatenate into plottable x,y series
    const std::string x = cfg.get("series_x", "");
    out << (x.empty() ? "" : "x,") << "parameter,mean_ratio\n";
    for (const auto& [name, total] : sum) {
      if (!x.empty()) out << x << ",";
      out << name << "," << total / count[name] << "\n";
    }
  }
  std::cout << "compared " << refs.size() << " dataset pairs\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"social-network regression under fixed rank nomination surveys"};
  app.require_subcommand(1);

  std::string config_path;
  auto add = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "key=value config file")->required();
    return sub;
  };
  CLI::App* sim = add("simulate", "generate synthetic survey datasets");
  CLI::App* fit = add("fit", "run the Gibbs sampler on a dataset");
  CLI::App* summ = add("summarize", "recompute summaries from a sample file");
  CLI::App* comp = add("compare", "cross-likelihood comparison tables");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Config cfg = Config::parse_file(config_path);
    if (sim->parsed()) return cmd_simulate(cfg);
    if (fit->parsed()) return cmd_fit(cfg);
    if (summ->parsed()) return cmd_summarize(cfg);
    if (comp->parsed()) return cmd_compare(cfg);
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace frn
