#pragma once

#include <string>
#include <vector>

#include "hypoharnack/config.hpp"
#include "hypoharnack/report.hpp"

namespace hypoharnack {

struct CampaignResult {
  int exit_code = 1; // 0 iff every acceptance predicate of the campaign passed
  double headline = 0.0;
  std::string headline_name;
  std::vector<std::string> artifacts; // paths written under output_dir
  std::string summary_json;
};

/// Run one campaign: writes manifest.json (resolved config + version), one CSV
/// per estimate trace and one JSON report/certificate into config.output_dir.
CampaignResult run_campaign(const ExperimentConfig& cfg);

/// Patch a numeric config field addressed by a dotted path
/// (e.g. "coefficients.lambda_max"); throws on unknown paths.
ExperimentConfig with_config_value(const ExperimentConfig& cfg, const std::string& dotted_path,
                                   double value);

/// Sweep a numeric axis: one campaign run per value, aggregated CSV with the
/// headline statistic, monotonicity flags in the summary. Per-value failures
/// are recorded, not fatal.
CampaignResult run_sweep(const ExperimentConfig& cfg, const std::string& dotted_path,
                         const std::vector<double>& values);

} // namespace hypoharnack
