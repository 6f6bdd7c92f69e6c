// Experiment runner for the hypoelliptic weak-Harnack toolkit.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypoharnack/campaigns.hpp"
#include "hypoharnack/config.hpp"
#include "hypoharnack/version.hpp"

namespace {

hypoharnack::ExperimentConfig load_config(const std::string& config_path,
                                          const std::string& campaign, long long seed,
                                          int jobs, const std::string& out_dir) {
  using hypoharnack::ExperimentConfig;
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig::defaults_for(campaign)
                                             : ExperimentConfig::from_file(config_path);
  if (!campaign.empty()) cfg.campaign = campaign;
  if (seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.coefficients.seed = cfg.seed;
  }
  if (jobs >= 0) cfg.jobs = jobs;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (const char* env = std::getenv("HYPOHARNACK_OUT"); env && *env) cfg.output_dir = env;
  return cfg;
}

int report_result(const hypoharnack::CampaignResult& r) {
  std::cout << r.summary_json << "\n";
  for (const auto& a : r.artifacts) std::cout << "wrote " << a << "\n";
  std::cout << (r.exit_code == 0 ? "PASS" : "FAIL") << " (" << r.headline_name << " = "
            << r.headline << ")\n";
  return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypoharnack: desk-scale verification of the hypoelliptic weak-Harnack pipeline"};
  app.set_version_flag("--version", hypoharnack::kVersion);

  std::string config_path, out_dir, campaign;
  long long seed = -1;
  int jobs = -1;

  app.add_option("--config", config_path, "config JSON path");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--jobs", jobs, "worker cap for inner parallel loops (0 = hardware)");
  app.add_option("--out", out_dir, "output directory (env HYPOHARNACK_OUT overrides)");

  app.fallthrough(); // global flags may follow the subcommand

  auto* run = app.add_subcommand("run", "run one campaign");
  run->fallthrough();
  run->add_option("campaign", campaign,
                  "kernel-validate | hypothesis1 | dual-spreading | sup-bound | weak-harnack | "
                  "convergence")
      ->required();

  auto* sweep = app.add_subcommand("sweep", "run a campaign over a numeric config axis");
  sweep->fallthrough();
  std::string axis;
  std::vector<double> values;
  sweep->add_option("campaign", campaign, "campaign name")->required();
  sweep->add_option("--axis", axis, "dotted config path, e.g. coefficients.lambda_max")
      ->required();
  sweep->add_option("--values", values, "axis values")->expected(-1);

  auto* defaults = app.add_subcommand("print-defaults", "print the resolved default config");
  defaults->fallthrough();
  defaults->add_option("campaign", campaign, "campaign name");

  auto* validate = app.add_subcommand("validate-config", "validate a config file");
  validate->fallthrough();

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  try {
    if (defaults->parsed()) {
      const auto cfg = hypoharnack::ExperimentConfig::defaults_for(
          campaign.empty() ? "kernel-validate" : campaign);
      std::cout << cfg.to_json_text() << "\n";
      return 0;
    }
    if (validate->parsed()) {
      if (config_path.empty()) {
        std::cerr << "validate-config requires --config\n";
        return 2;
      }
      const auto cfg = load_config(config_path, "", seed, jobs, out_dir);
      const auto errs = cfg.validate();
      if (errs.empty()) {
        std::cout << "config valid\n";
        return 0;
      }
      for (const auto& e : errs) std::cerr << "error: " << e << "\n";
      return 1;
    }
    if (run->parsed()) {
      const auto cfg = load_config(config_path, campaign, seed, jobs, out_dir);
      return report_result(hypoharnack::run_campaign(cfg));
    }
    if (sweep->parsed()) {
      const auto cfg = load_config(config_path, campaign, seed, jobs, out_dir);
      return report_result(hypoharnack::run_sweep(cfg, axis, values));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
