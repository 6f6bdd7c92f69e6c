#include "hypoharnack/campaigns.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hypoharnack/harnack.hpp"
#include "hypoharnack/kolmogorov.hpp"
#include "hypoharnack/parallel.hpp"
#include "hypoharnack/version.hpp"

namespace hypoharnack {

namespace {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void write_manifest(const ExperimentConfig& cfg, CampaignResult& res) {
  fs::create_directories(cfg.output_dir);
  ordered_json j;
  j["tool"] = "hypoharnack";
  j["version"] = kVersion;
  j["config"] = ordered_json::parse(cfg.to_json_text());
  const std::string p = out_path(cfg, "manifest.json");
  write_text(p, j.dump(2));
  res.artifacts.push_back(p);
}

GridField gaussian_bump_level0(const Grid& g, double amplitude, double width) {
  GridField u0(g);
  const std::int64_t S = g.slice_size();
  for (std::int64_t j = 0; j < S; ++j) {
    const PhasePoint p = g.point(0, g.spatial_unflat(j));
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += p.pos[a] * p.pos[a] + p.vel[a] * p.vel[a];
    u0.at(0, j) = amplitude * std::exp(-r2 / (2.0 * width * width));
  }
  return u0;
}

SupOptions sup_options_from(const ExperimentConfig& cfg) {
  SupOptions o;
  o.max_iters = cfg.degiorgi.max_iters;
  o.z_tol_rel = cfg.degiorgi.z_tol_rel;
  o.d_cap = cfg.degiorgi.d_cap;
  o.dict_size = cfg.degiorgi.dict_size;
  o.ordering_tol = cfg.degiorgi.ordering_tol;
  o.chain = cfg.degiorgi.chain == "none"  ? ChainMode::None
            : cfg.degiorgi.chain == "all" ? ChainMode::All
                                          : ChainMode::Final;
  return o;
}

HarnackOptions harnack_options_from(const ExperimentConfig& cfg) {
  HarnackOptions o;
  o.c_r = cfg.harnack.c_r;
  o.beta_sup = cfg.harnack.beta_sup;
  o.delta_max_j = cfg.harnack.delta_max_j;
  o.dict_size = cfg.degiorgi.dict_size;
  o.evo_rtol = cfg.harnack.evo_rtol;
  o.sup = sup_options_from(cfg);
  return o;
}

// ---------------------------------------------------------------------------

CampaignResult campaign_kernel_validate(const ExperimentConfig& cfg) {
  CampaignResult res;
  write_manifest(cfg, res);
  const KernelSpec spec{cfg.grid.dim};

  CsvWriter csv({"tau", "mass_error"});
  double max_norm_err = 0.0;
  for (double tau : cfg.params.kernel_taus) {
    const double err = std::fabs(kernel_mass(spec, tau, 400) - 1.0);
    max_norm_err = std::max(max_norm_err, err);
    csv.add_row_values({tau, err});
  }

  // FD residual order at points with |p - q| >= 1, tau >= 0.2
  PhasePoint q; // source at the origin
  std::vector<double> orders;
  double worst_res = 0.0;
  const double h0 = 0.02;
  for (int i = 0; i < 12; ++i) {
    PhasePoint p;
    const double ang = 0.5 + 0.4 * i;
    p.pos[0] = 1.2 * std::cos(ang);
    p.vel[0] = 1.2 * std::sin(ang);
    if (cfg.grid.dim > 1) {
      p.pos[1] = 0.3 * std::sin(2.0 * ang);
      p.vel[1] = 0.3 * std::cos(2.0 * ang);
    }
    const double tau = 0.2 + 0.08 * i;
    const double r1 = kernel_fd_residual(spec, tau, p, 0.0, q, h0);
    const double r2 = kernel_fd_residual(spec, tau, p, 0.0, q, h0 / 2.0);
    worst_res = std::max(worst_res, r2);
    if (r1 > 1e-12 && r2 > 1e-14) orders.push_back(std::log2(r1 / r2));
  }
  double min_order = orders.empty() ? 0.0 : orders.front();
  for (double o : orders) min_order = std::min(min_order, o);

  // concentration: Gamma-weighted mean -> transported point
  PhasePoint src;
  src.pos[0] = 0.3;
  src.vel[0] = 0.7;
  double conc_err = 0.0;
  for (double tau : {0.05, 0.025}) {
    double mean[2 * kMaxDim];
    kernel_mean(spec, tau, src, 300, mean);
    const PhasePoint moved = flow(DriftKind::Kinetic, 0.0, tau, src);
    conc_err = std::max(conc_err, std::fabs(mean[0] - moved.pos[0]) / tau);
    conc_err = std::max(conc_err, std::fabs(mean[spec.dim] - moved.vel[0]) / tau);
  }

  double chapman = 0.0;
  if (spec.dim == 1) {
    PhasePoint p;
    p.pos[0] = 0.4;
    p.vel[0] = -0.2;
    chapman = kernel_chapman_defect(spec, 0.8, p, 0.0, q, 0.35, 240);
  }

  const std::string csv_path = out_path(cfg, "kernel_validate.csv");
  csv.write(csv_path);
  res.artifacts.push_back(csv_path);

  const bool passed = max_norm_err <= cfg.acceptance.kernel_norm_tol &&
                      min_order >= cfg.acceptance.kernel_order_min;
  ordered_json j;
  j["campaign"] = "kernel-validate";
  j["max_norm_error"] = max_norm_err;
  j["min_residual_order"] = min_order;
  j["max_residual_fine"] = worst_res;
  j["concentration_rate"] = conc_err;
  j["chapman_defect"] = chapman;
  j["passed"] = passed;
  const std::string jp = out_path(cfg, "kernel_report.json");
  write_text(jp, j.dump(2));
  res.artifacts.push_back(jp);
  res.summary_json = j.dump(2);
  res.headline = max_norm_err;
  res.headline_name = "max_norm_error";
  res.exit_code = passed ? 0 : 1;
  return res;
}

CampaignResult campaign_hypothesis1(const ExperimentConfig& cfg) {
  CampaignResult res;
  write_manifest(cfg, res);
  const Grid g = cfg.make_grid();

  Hypothesis1Probe probe;
  probe.grid = g;
  const double span = g.t_max - g.t_min;
  probe.t_init = g.t_min + 0.1 * span;
  double rad = cfg.params.omega_radius;
  if (rad <= 0.0) rad = 0.7 * std::min(g.x_max[0], g.v_max[0]);
  probe.omega = Cylinder{PhasePoint{g.t_max, {0, 0}, {0, 0}}, 0.9 * span, rad, DriftKind::Zero,
                         g.dim};
  probe.p1 = cfg.exponents.p1;
  probe.gamma0 = cfg.exponents.gamma0;
  probe.gamma1 = cfg.exponents.gamma1;
  probe.trials = cfg.params.trials;
  probe.levels = cfg.params.levels;
  probe.seed = cfg.seed;

  EstimateReport rep = probe_hypothesis1(probe);
  rep.passed = rep.get_extra("max_rel_change") <= cfg.acceptance.hyp1_stability;

  CsvWriter csv({"trial", "ratio"});
  for (std::size_t i = 0; i < rep.trials.size(); ++i)
    csv.add_row_values({static_cast<double>(i), rep.trials[i]});
  const std::string cp = out_path(cfg, "hypothesis1_ratios.csv");
  csv.write(cp);
  res.artifacts.push_back(cp);

  const std::string jp = out_path(cfg, "hypothesis1_report.json");
  write_text(jp, report_to_json(rep));
  res.artifacts.push_back(jp);
  res.summary_json = report_to_json(rep);
  res.headline = rep.get_extra("max_ratio_level_0");
  res.headline_name = "C0";
  res.exit_code = rep.passed ? 0 : 1;
  return res;
}

CampaignResult campaign_dual_spreading(const ExperimentConfig& cfg) {
  CampaignResult res;
  write_manifest(cfg, res);
  const Grid g = cfg.make_grid();

  DualSpreadingProbe probe;
  probe.grid = g;
  probe.base = PhasePoint{g.t_max, {0, 0}, {0, 0}};
  probe.eta = cfg.harnack.eta;
  probe.p2 = cfg.exponents.p2;
  probe.R = std::max(cfg.harnack.c_r * std::pow(1.0 + cfg.harnack.delta_s, cfg.harnack.beta_sup),
                     1.05);
  probe.trials = cfg.params.trials;
  probe.levels = cfg.params.levels;
  probe.seed = cfg.seed;

  const EstimateReport rep = probe_dual_spreading(probe);

  CsvWriter csv({"trial", "mu0"});
  for (std::size_t i = 0; i < rep.trials.size(); ++i)
    csv.add_row_values({static_cast<double>(i), rep.trials[i]});
  const std::string cp = out_path(cfg, "dual_spreading_mu0.csv");
  csv.write(cp);
  res.artifacts.push_back(cp);
  const std::string jp = out_path(cfg, "dual_spreading_report.json");
  write_text(jp, report_to_json(rep));
  res.artifacts.push_back(jp);
  res.summary_json = report_to_json(rep);
  res.headline = rep.get_extra("mu0_level_0");
  res.headline_name = "mu0";
  res.exit_code = rep.passed ? 0 : 1;
  return res;
}

struct SupCase {
  SupremumBound bound;
  double grid_max_inner = 0.0;
};

SupCase run_sup_case(const ExperimentConfig& cfg, const Grid& g) {
  const RoughCoefficients coeffs = make_coefficients(g, cfg.coefficients);
  const GridField u0 = gaussian_bump_level0(g, cfg.params.u0_amplitude, 0.6);
  const EvolveResult ev = evolve(coeffs, u0);

  const PhasePoint base{g.t_max, {0, 0}, {0, 0}};
  const Cylinder inner{base, cfg.cylinders.inner_s, cfg.cylinders.inner_r, DriftKind::Kinetic,
                       g.dim};
  const Cylinder outer{base, cfg.cylinders.outer_s, cfg.cylinders.outer_r, DriftKind::Kinetic,
                       g.dim};
  SupCase out;
  out.bound = supremum_bound(ev.u, coeffs, inner, outer, cfg.exponents, sup_options_from(cfg));
  out.grid_max_inner = max_over(ev.u, cylinder_weights(g, inner));
  return out;
}

CampaignResult campaign_sup_bound(const ExperimentConfig& cfg) {
  CampaignResult res;
  write_manifest(cfg, res);

  // refinement pair: 0.75x and the configured grid
  std::vector<double> scales = {0.75, 1.0};
  if (cfg.params.levels == 1) scales = {1.0};
  std::vector<SupCase> cases;
  std::vector<double> dstars;
  for (double s : scales) {
    const Grid g = refined(cfg.make_grid(), s);
    cases.push_back(run_sup_case(cfg, g));
    dstars.push_back(cases.back().bound.d_star);
  }
  const SupCase& base_case = cases.back();

  // C_S, beta from a delta_S sweep (scaled Lambda via lambda_max)
  std::vector<double> xs, ys;
  for (double lm : {2.0, 4.0, 8.0}) {
    ExperimentConfig c2 = cfg;
    c2.coefficients.lambda_max = lm;
    if (c2.coefficients.kind == "identity") c2.coefficients.kind = "checkerboard";
    const Grid g = refined(c2.make_grid(), 0.75);
    SupCase sc = run_sup_case(c2, g);
    if (sc.bound.certified) {
      xs.push_back(1.0 + sc.bound.delta_s);
      ys.push_back(sc.bound.d_star);
    }
  }
  double c_s = 0.0, beta = 0.0;
  if (xs.size() >= 2) {
    auto fit = fit_power_law(xs, ys);
    c_s = fit.first;
    beta = fit.second;
  }

  // trace CSV of the certified run at the base grid
  CsvWriter csv({"k", "h_k", "eps_k", "Z_k", "M_k", "ratio"});
  for (const auto& st : base_case.bound.trace)
    csv.add_row_values({static_cast<double>(st.k), st.h, st.eps, st.Z, st.M, st.ratio});
  const std::string cp = out_path(cfg, "sup_trace.csv");
  csv.write(cp);
  res.artifacts.push_back(cp);

  double stability = 0.0;
  for (std::size_t i = 1; i < dstars.size(); ++i)
    if (dstars[i - 1] > 0.0)
      stability = std::max(stability, std::fabs(dstars[i] - dstars[i - 1]) / dstars[i - 1]);

  const bool sound = base_case.bound.certified &&
                     base_case.bound.sup_estimate >= base_case.grid_max_inner - 1e-9 &&
                     base_case.bound.sup_estimate <=
                         cfg.acceptance.sup_sound_factor *
                             std::max(base_case.grid_max_inner, 1e-12);
  const bool passed = sound && base_case.bound.invariants_ok &&
                      stability <= cfg.acceptance.sup_stability;

  ordered_json j;
  j["campaign"] = "sup-bound";
  j["certified"] = base_case.bound.certified;
  j["d_star"] = base_case.bound.d_star;
  j["sup_estimate"] = base_case.bound.sup_estimate;
  j["N"] = base_case.bound.N;
  j["delta_s"] = base_case.bound.delta_s;
  j["grid_max_inner"] = base_case.grid_max_inner;
  j["invariants_ok"] = base_case.bound.invariants_ok;
  j["d_star_stability"] = stability;
  j["C_S"] = c_s;
  j["beta"] = beta;
  j["passed"] = passed;
  if (!base_case.bound.failure.empty()) j["failure"] = base_case.bound.failure;
  j["chain"] = ordered_json::array();
  for (const auto& r : base_case.bound.chain_reports)
    j["chain"].push_back(ordered_json::parse(report_to_json(r)));
  const std::string jp = out_path(cfg, "sup_report.json");
  write_text(jp, j.dump(2));
  res.artifacts.push_back(jp);
  res.summary_json = j.dump(2);
  res.headline = c_s > 0.0 ? c_s : base_case.bound.d_star;
  res.headline_name = "C_S";
  res.exit_code = passed ? 0 : 1;
  return res;
}

struct HarnackCase {
  HarnackCertificate cert;
};

HarnackCase run_harnack_case(const ExperimentConfig& cfg, const Grid& g) {
  RoughCoefficients coeffs = make_coefficients(g, cfg.coefficients);
  const GridField u0 = gaussian_bump_level0(g, cfg.params.u0_amplitude, 0.7);
  const EvolveResult ev = evolve(coeffs, u0);

  // scale u so that |{u >= 1}| matches the requested eta fraction
  const PhasePoint base{g.t_max, {0, 0}, {0, 0}};
  const Cylinder c11{base, 1.0, 1.0, DriftKind::Kinetic, g.dim};
  const RegionWeights reg = cylinder_weights(g, c11, base.t - 2.0 / 3.0);
  const double target = std::min(1.0, cfg.harnack.eta * 1.08) * reg.measure;
  double lo = 1e-6, hi = 1e9;
  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (measure_above(reg, ev.u, 1.0 / mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  const double alpha = hi;
  GridField u = ev.u;
  for (auto& x : u.data) x *= alpha;
  for (auto& f : coeffs.f)
    for (auto& x : f.data) x *= alpha;
  for (auto& x : coeffs.g.data) x *= alpha;

  HarnackCase out;
  out.cert = weak_harnack(u, coeffs, cfg.harnack.eta, cfg.harnack.delta_s, cfg.harnack.Delta,
                          cfg.exponents, harnack_options_from(cfg));
  return out;
}

CampaignResult campaign_weak_harnack(const ExperimentConfig& cfg) {
  CampaignResult res;
  write_manifest(cfg, res);

  std::vector<double> scales = {0.75, 1.0};
  if (cfg.params.levels == 1) scales = {1.0};
  std::vector<HarnackCase> cases;
  for (double s : scales) cases.push_back(run_harnack_case(cfg, refined(cfg.make_grid(), s)));
  const HarnackCertificate& cert = cases.back().cert;

  double stability = 0.0;
  for (std::size_t i = 1; i < cases.size(); ++i) {
    const double prev = cases[i - 1].cert.mu;
    if (prev > 0.0)
      stability = std::max(stability, std::fabs(cases[i].cert.mu - prev) / prev);
  }

  CsvWriter csv({"report", "delta", "lhs", "rhs", "ratio", "passed"});
  for (const auto& r : cert.chain)
    csv.add_row({r.name, format_double(r.get_extra("delta")), format_double(r.lhs),
                 format_double(r.rhs), format_double(r.ratio), r.passed ? "1" : "0"});
  const std::string cp = out_path(cfg, "harnack_chain.csv");
  csv.write(cp);
  res.artifacts.push_back(cp);

  const std::string jp = out_path(cfg, "harnack_certificate.json");
  write_text(jp, certificate_to_json(cert));
  res.artifacts.push_back(jp);

  const bool passed =
      cert.passed && cert.sound && (scales.size() < 2 || stability <= cfg.acceptance.mu_stability);
  ordered_json j = ordered_json::parse(certificate_to_json(cert));
  j["mu_stability"] = stability;
  j["campaign_passed"] = passed;
  res.summary_json = j.dump(2);
  write_text(out_path(cfg, "harnack_report.json"), res.summary_json);
  res.artifacts.push_back(out_path(cfg, "harnack_report.json"));
  res.headline = cert.mu;
  res.headline_name = "mu";
  res.exit_code = passed ? 0 : 1;
  return res;
}

CampaignResult campaign_convergence(const ExperimentConfig& cfg) {
  CampaignResult res;
  write_manifest(cfg, res);
  const Grid g = cfg.make_grid();

  SmoothProblem pb;
  pb.grid = g;
  pb.t_init = g.t_min;
  pb.G = sample(g, [&](const PhasePoint& p) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += p.pos[a] * p.pos[a] + p.vel[a] * p.vel[a];
    const double tmid = 0.5 * (g.t_min + g.t_max);
    const double tw = 0.25 * (g.t_max - g.t_min);
    const double ts = (p.t - tmid) / tw;
    const double tb = std::max(0.0, 1.0 - ts * ts);
    return tb * tb * std::exp(-2.0 * r2);
  });

  CutoffField chi;
  chi.kind = CutoffKind::Spatial;
  chi.profile = RadialProfile::Shell;
  chi.drift = DriftKind::Zero;
  chi.dim = g.dim;
  chi.inner = 0.55 * std::min(g.x_max[0], g.v_max[0]);
  chi.outer = 0.85 * std::min(g.x_max[0], g.v_max[0]);

  std::vector<ViscousSolution> sols;
  for (double eps : cfg.params.eps_visc) sols.push_back(viscous_comparison(eps, pb, chi));

  const RegionWeights box = box_weights(g);
  std::vector<double> cauchy;
  for (std::size_t i = 0; i + 1 < sols.size(); ++i) {
    GridField diff(g);
    for (std::size_t k = 0; k < diff.data.size(); ++k)
      diff.data[k] = sols[i].w.data[k] - sols[i + 1].w.data[k];
    cauchy.push_back(lp_norm(diff, box, 2.0));
  }

  bool cauchy_decreasing = true;
  for (std::size_t i = 1; i < cauchy.size(); ++i)
    if (cauchy[i] >= cauchy[i - 1]) cauchy_decreasing = false;

  auto spread = [&](auto get) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& s : sols) {
      lo = std::min(lo, get(s));
      hi = std::max(hi, get(s));
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  };
  const double sp_l2 = spread([](const ViscousSolution& s) { return s.norm_l2; });
  const double sp_xg = spread([](const ViscousSolution& s) { return s.norm_xgrad; });
  const double sp_eg = spread([](const ViscousSolution& s) { return s.norm_extgrad; });
  const double max_spread = std::max(sp_l2, std::max(sp_xg, sp_eg));

  CsvWriter csv({"eps_visc", "norm_l2", "norm_xgrad", "norm_extgrad", "cauchy_to_next"});
  for (std::size_t i = 0; i < sols.size(); ++i)
    csv.add_row_values({cfg.params.eps_visc[i], sols[i].norm_l2, sols[i].norm_xgrad,
                        sols[i].norm_extgrad, i < cauchy.size() ? cauchy[i] : 0.0});
  const std::string cp = out_path(cfg, "convergence.csv");
  csv.write(cp);
  res.artifacts.push_back(cp);

  const bool passed = cauchy_decreasing && max_spread <= cfg.acceptance.viscous_energy_spread;
  ordered_json j;
  j["campaign"] = "convergence";
  j["cauchy_diffs"] = cauchy;
  j["cauchy_decreasing"] = cauchy_decreasing;
  j["energy_spread"] = max_spread;
  j["passed"] = passed;
  const std::string jp = out_path(cfg, "convergence_report.json");
  write_text(jp, j.dump(2));
  res.artifacts.push_back(jp);
  res.summary_json = j.dump(2);
  res.headline = cauchy.empty() ? 0.0 : cauchy.back();
  res.headline_name = "last_cauchy_diff";
  res.exit_code = passed ? 0 : 1;
  return res;
}

} // namespace

CampaignResult run_campaign(const ExperimentConfig& cfg) {
  {
    const auto errs = cfg.validate();
    if (!errs.empty()) {
      std::string all = "invalid config:";
      for (const auto& e : errs) all += "\n  " + e;
      throw std::invalid_argument(all);
    }
  }
  set_parallel_jobs(cfg.jobs);
  if (cfg.campaign == "kernel-validate") return campaign_kernel_validate(cfg);
  if (cfg.campaign == "hypothesis1") return campaign_hypothesis1(cfg);
  if (cfg.campaign == "dual-spreading") return campaign_dual_spreading(cfg);
  if (cfg.campaign == "sup-bound") return campaign_sup_bound(cfg);
  if (cfg.campaign == "weak-harnack") return campaign_weak_harnack(cfg);
  if (cfg.campaign == "convergence") return campaign_convergence(cfg);
  throw std::invalid_argument("unknown campaign: " + cfg.campaign);
}

ExperimentConfig with_config_value(const ExperimentConfig& cfg, const std::string& dotted_path,
                                   double value) {
  ordered_json j = ordered_json::parse(cfg.to_json_text());
  std::string ptr = "/";
  for (char c : dotted_path) ptr += (c == '.') ? '/' : c;
  const nlohmann::json_pointer<std::string> jp(ptr);
  if (!j.contains(jp))
    throw std::invalid_argument("sweep axis does not name a config field: " + dotted_path);
  if (!j.at(jp).is_number())
    throw std::invalid_argument("sweep axis must name a numeric field: " + dotted_path);
  j[jp] = value;
  return ExperimentConfig::from_json_text(j.dump());
}

CampaignResult run_sweep(const ExperimentConfig& cfg, const std::string& dotted_path,
                         const std::vector<double>& values) {
  CampaignResult res;
  fs::create_directories(cfg.output_dir);

  std::vector<double> headlines;
  std::vector<int> exits;
  std::string headline_name = "headline";
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig sub = with_config_value(cfg, dotted_path, values[i]);
    sub.output_dir =
        (fs::path(cfg.output_dir) / ("sweep_" + std::to_string(i))).string();
    try {
      const CampaignResult r = run_campaign(sub);
      headlines.push_back(r.headline);
      exits.push_back(r.exit_code);
      headline_name = r.headline_name;
    } catch (const std::exception& e) {
      headlines.push_back(std::nan(""));
      exits.push_back(2);
    }
  }

  CsvWriter csv({"value", headline_name, "exit_code"});
  for (std::size_t i = 0; i < values.size(); ++i)
    csv.add_row_values({values[i], headlines[i], static_cast<double>(exits[i])});
  const std::string cp = out_path(cfg, "sweep.csv");
  csv.write(cp);
  res.artifacts.push_back(cp);

  bool noninc = true, nondec = true;
  for (std::size_t i = 1; i < headlines.size(); ++i) {
    if (std::isnan(headlines[i]) || std::isnan(headlines[i - 1])) {
      noninc = nondec = false;
      break;
    }
    if (headlines[i] > headlines[i - 1] + 1e-12) noninc = false;
    if (headlines[i] + 1e-12 < headlines[i - 1]) nondec = false;
  }

  ordered_json j;
  j["axis"] = dotted_path;
  j["values"] = values;
  j[headline_name] = headlines;
  j["exit_codes"] = exits;
  j["monotone_nonincreasing"] = noninc;
  j["monotone_nondecreasing"] = nondec;
  const std::string jp = out_path(cfg, "sweep_summary.json");
  write_text(jp, j.dump(2));
  res.artifacts.push_back(jp);
  res.summary_json = j.dump(2);
  res.headline = headlines.empty() ? 0.0 : headlines.back();
  res.headline_name = headline_name;
  int code = 0;
  for (int e : exits)
    if (e != 0) code = 1;
  res.exit_code = code;
  return res;
}

} // namespace hypoharnack
