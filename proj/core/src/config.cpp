#include "hypoharnack/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hypoharnack/geometry.hpp"
#include "hypoharnack/norms.hpp"

namespace hypoharnack {

namespace {
using nlohmann::ordered_json;

const std::set<std::string> kCampaigns = {"kernel-validate", "hypothesis1", "dual-spreading",
                                          "sup-bound",       "weak-harnack", "convergence"};

double exp_from_json(const ordered_json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfExponent;
    throw std::invalid_argument("exponent strings must be \"inf\"");
  }
  return j.get<double>();
}

ordered_json exp_to_json(double q) {
  if (q == kInfExponent) return "inf";
  return q;
}

template <typename T>
void fetch(const ordered_json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void fetch_exp(const ordered_json& j, const char* key, double& dst) {
  if (j.contains(key)) dst = exp_from_json(j.at(key));
}

void check_known_keys(const ordered_json& j, const std::set<std::string>& known,
                      const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("unknown config key: " + path + it.key());
}

} // namespace

ExperimentConfig ExperimentConfig::defaults_for(const std::string& campaign) {
  ExperimentConfig c;
  c.campaign = campaign;
  if (campaign == "hypothesis1") {
    c.grid.nt = 32;
    c.grid.nx = 32;
    c.grid.nv = 32;
    c.grid.x_extent = 3.0;
    c.grid.v_extent = 3.0;
  } else if (campaign == "dual-spreading") {
    c.grid.nt = 48;
    c.grid.nx = 64;
    c.grid.nv = 48;
    c.params.trials = 6;
  } else if (campaign == "sup-bound") {
    c.grid.x_extent = 4.5;
    c.grid.v_extent = 2.5;
  } else if (campaign == "weak-harnack") {
    c.grid.nt = 48;
    c.grid.nx = 96;
    c.grid.nv = 64;
  } else if (campaign == "convergence") {
    c.grid.nt = 24;
    c.grid.nx = 24;
    c.grid.nv = 24;
    c.grid.x_extent = 3.0;
    c.grid.v_extent = 3.0;
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  std::string campaign = "kernel-validate";
  if (j.contains("campaign")) campaign = j.at("campaign").get<std::string>();
  ExperimentConfig c = defaults_for(campaign);

  check_known_keys(j,
                   {"campaign", "seed", "jobs", "output_dir", "grid", "coefficients",
                    "exponents", "cylinders", "degiorgi", "harnack", "params", "acceptance"},
                   "");
  fetch(j, "seed", c.seed);
  fetch(j, "jobs", c.jobs);
  fetch(j, "output_dir", c.output_dir);

  if (j.contains("grid")) {
    const auto& gj = j.at("grid");
    check_known_keys(gj, {"dim", "nt", "nx", "nv", "t_min", "t_max", "x_extent", "v_extent", "pad"},
                     "grid.");
    fetch(gj, "dim", c.grid.dim);
    fetch(gj, "nt", c.grid.nt);
    fetch(gj, "nx", c.grid.nx);
    fetch(gj, "nv", c.grid.nv);
    fetch(gj, "t_min", c.grid.t_min);
    fetch(gj, "t_max", c.grid.t_max);
    fetch(gj, "x_extent", c.grid.x_extent);
    fetch(gj, "v_extent", c.grid.v_extent);
    fetch(gj, "pad", c.grid.pad);
  }
  if (j.contains("coefficients")) {
    const auto& cj = j.at("coefficients");
    check_known_keys(
        cj, {"kind", "lambda", "lambda_max", "blocks", "time_constant", "lower_order"},
        "coefficients.");
    fetch(cj, "kind", c.coefficients.kind);
    fetch(cj, "lambda", c.coefficients.lambda);
    fetch(cj, "lambda_max", c.coefficients.lambda_max);
    fetch(cj, "blocks", c.coefficients.blocks);
    fetch(cj, "time_constant", c.coefficients.time_constant);
    if (cj.contains("lower_order")) {
      const auto& lj = cj.at("lower_order");
      check_known_keys(lj, {"b", "c", "d", "f", "g"}, "coefficients.lower_order.");
      fetch(lj, "b", c.coefficients.amp_b);
      fetch(lj, "c", c.coefficients.amp_c);
      fetch(lj, "d", c.coefficients.amp_d);
      fetch(lj, "f", c.coefficients.amp_f);
      fetch(lj, "g", c.coefficients.amp_g);
    }
  }
  c.coefficients.seed = c.seed;
  if (j.contains("exponents")) {
    const auto& ej = j.at("exponents");
    check_known_keys(ej,
                     {"p0", "p1", "p2", "gamma0", "gamma1", "q_lambda", "q_b", "q_c", "q_d",
                      "q_bar0", "q_bar2"},
                     "exponents.");
    fetch(ej, "p0", c.exponents.p0);
    fetch(ej, "p1", c.exponents.p1);
    fetch(ej, "p2", c.exponents.p2);
    fetch(ej, "gamma0", c.exponents.gamma0);
    fetch(ej, "gamma1", c.exponents.gamma1);
    fetch_exp(ej, "q_lambda", c.exponents.q_lambda);
    fetch_exp(ej, "q_b", c.exponents.q_b);
    fetch_exp(ej, "q_c", c.exponents.q_c);
    fetch_exp(ej, "q_d", c.exponents.q_d);
    fetch_exp(ej, "q_bar0", c.exponents.q_bar0);
    fetch_exp(ej, "q_bar2", c.exponents.q_bar2);
  }
  if (j.contains("cylinders")) {
    const auto& yj = j.at("cylinders");
    check_known_keys(yj, {"inner_s", "inner_r", "outer_s", "outer_r"}, "cylinders.");
    fetch(yj, "inner_s", c.cylinders.inner_s);
    fetch(yj, "inner_r", c.cylinders.inner_r);
    fetch(yj, "outer_s", c.cylinders.outer_s);
    fetch(yj, "outer_r", c.cylinders.outer_r);
  }
  if (j.contains("degiorgi")) {
    const auto& dj = j.at("degiorgi");
    check_known_keys(dj,
                     {"max_iters", "z_tol_rel", "d_cap", "dict_size", "chain", "ordering_tol",
                      "beta_series"},
                     "degiorgi.");
    fetch(dj, "max_iters", c.degiorgi.max_iters);
    fetch(dj, "z_tol_rel", c.degiorgi.z_tol_rel);
    fetch(dj, "d_cap", c.degiorgi.d_cap);
    fetch(dj, "dict_size", c.degiorgi.dict_size);
    fetch(dj, "chain", c.degiorgi.chain);
    fetch(dj, "ordering_tol", c.degiorgi.ordering_tol);
    fetch(dj, "beta_series", c.degiorgi.beta_series);
  }
  if (j.contains("harnack")) {
    const auto& hj = j.at("harnack");
    check_known_keys(
        hj, {"c_r", "beta_sup", "eta", "delta_s", "Delta", "delta_max_j", "evo_rtol"},
        "harnack.");
    fetch(hj, "c_r", c.harnack.c_r);
    fetch(hj, "beta_sup", c.harnack.beta_sup);
    fetch(hj, "eta", c.harnack.eta);
    fetch(hj, "delta_s", c.harnack.delta_s);
    fetch(hj, "Delta", c.harnack.Delta);
    fetch(hj, "delta_max_j", c.harnack.delta_max_j);
    fetch(hj, "evo_rtol", c.harnack.evo_rtol);
  }
  if (j.contains("params")) {
    const auto& pj = j.at("params");
    check_known_keys(pj,
                     {"trials", "levels", "eps_visc", "kernel_taus", "u0_amplitude",
                      "omega_radius"},
                     "params.");
    fetch(pj, "trials", c.params.trials);
    fetch(pj, "levels", c.params.levels);
    fetch(pj, "eps_visc", c.params.eps_visc);
    fetch(pj, "kernel_taus", c.params.kernel_taus);
    fetch(pj, "u0_amplitude", c.params.u0_amplitude);
    fetch(pj, "omega_radius", c.params.omega_radius);
  }
  if (j.contains("acceptance")) {
    const auto& aj = j.at("acceptance");
    check_known_keys(aj,
                     {"kernel_norm_tol", "kernel_order_min", "hyp1_stability", "wmp_tol",
                      "sup_sound_factor", "sup_stability", "mu_stability",
                      "viscous_energy_spread"},
                     "acceptance.");
    fetch(aj, "kernel_norm_tol", c.acceptance.kernel_norm_tol);
    fetch(aj, "kernel_order_min", c.acceptance.kernel_order_min);
    fetch(aj, "hyp1_stability", c.acceptance.hyp1_stability);
    fetch(aj, "wmp_tol", c.acceptance.wmp_tol);
    fetch(aj, "sup_sound_factor", c.acceptance.sup_sound_factor);
    fetch(aj, "sup_stability", c.acceptance.sup_stability);
    fetch(aj, "mu_stability", c.acceptance.mu_stability);
    fetch(aj, "viscous_energy_spread", c.acceptance.viscous_energy_spread);
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
  ordered_json j;
  j["campaign"] = campaign;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["output_dir"] = output_dir;
  j["grid"] = {{"dim", grid.dim},         {"nt", grid.nt},
               {"nx", grid.nx},           {"nv", grid.nv},
               {"t_min", grid.t_min},     {"t_max", grid.t_max},
               {"x_extent", grid.x_extent}, {"v_extent", grid.v_extent},
               {"pad", grid.pad}};
  j["coefficients"] = {{"kind", coefficients.kind},
                       {"lambda", coefficients.lambda},
                       {"lambda_max", coefficients.lambda_max},
                       {"blocks", coefficients.blocks},
                       {"time_constant", coefficients.time_constant},
                       {"lower_order",
                        {{"b", coefficients.amp_b},
                         {"c", coefficients.amp_c},
                         {"d", coefficients.amp_d},
                         {"f", coefficients.amp_f},
                         {"g", coefficients.amp_g}}}};
  j["exponents"] = {{"p0", exponents.p0},
                    {"p1", exponents.p1},
                    {"p2", exponents.p2},
                    {"gamma0", exponents.gamma0},
                    {"gamma1", exponents.gamma1},
                    {"q_lambda", exp_to_json(exponents.q_lambda)},
                    {"q_b", exp_to_json(exponents.q_b)},
                    {"q_c", exp_to_json(exponents.q_c)},
                    {"q_d", exp_to_json(exponents.q_d)},
                    {"q_bar0", exp_to_json(exponents.q_bar0)},
                    {"q_bar2", exp_to_json(exponents.q_bar2)}};
  j["cylinders"] = {{"inner_s", cylinders.inner_s},
                    {"inner_r", cylinders.inner_r},
                    {"outer_s", cylinders.outer_s},
                    {"outer_r", cylinders.outer_r}};
  j["degiorgi"] = {{"max_iters", degiorgi.max_iters},   {"z_tol_rel", degiorgi.z_tol_rel},
                   {"d_cap", degiorgi.d_cap},           {"dict_size", degiorgi.dict_size},
                   {"chain", degiorgi.chain},           {"ordering_tol", degiorgi.ordering_tol},
                   {"beta_series", degiorgi.beta_series}};
  j["harnack"] = {{"c_r", harnack.c_r},         {"beta_sup", harnack.beta_sup},
                  {"eta", harnack.eta},         {"delta_s", harnack.delta_s},
                  {"Delta", harnack.Delta},     {"delta_max_j", harnack.delta_max_j},
                  {"evo_rtol", harnack.evo_rtol}};
  j["params"] = {{"trials", params.trials},
                 {"levels", params.levels},
                 {"eps_visc", params.eps_visc},
                 {"kernel_taus", params.kernel_taus},
                 {"u0_amplitude", params.u0_amplitude},
                 {"omega_radius", params.omega_radius}};
  j["acceptance"] = {{"kernel_norm_tol", acceptance.kernel_norm_tol},
                     {"kernel_order_min", acceptance.kernel_order_min},
                     {"hyp1_stability", acceptance.hyp1_stability},
                     {"wmp_tol", acceptance.wmp_tol},
                     {"sup_sound_factor", acceptance.sup_sound_factor},
                     {"sup_stability", acceptance.sup_stability},
                     {"mu_stability", acceptance.mu_stability},
                     {"viscous_energy_spread", acceptance.viscous_energy_spread}};
  return j.dump(2);
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> errs;
  if (!kCampaigns.count(campaign)) errs.push_back("campaign: unknown campaign '" + campaign + "'");
  if (grid.dim < 1 || grid.dim > kMaxDim) errs.push_back("grid.dim: must be 1 or 2");
  if (grid.nt < 4 || grid.nx < 4 || grid.nv < 4) errs.push_back("grid: counts must be >= 4");
  if (!(grid.t_min < grid.t_max)) errs.push_back("grid: requires t_min < t_max");
  if (!(coefficients.lambda > 0.0)) errs.push_back("coefficients.lambda: must be > 0");
  if (coefficients.lambda_max < coefficients.lambda)
    errs.push_back("coefficients.lambda_max: must be >= lambda");
  for (const auto& e : validate_exponents(exponents)) errs.push_back("exponents: " + e);
  if (!(cylinders.inner_s < cylinders.outer_s && cylinders.inner_r < cylinders.outer_r))
    errs.push_back("cylinders: inner must be strictly inside outer");
  if (!(harnack.eta > 0.0 && harnack.eta <= 1.0)) errs.push_back("harnack.eta: must be in (0,1]");
  if (degiorgi.chain != "none" && degiorgi.chain != "final" && degiorgi.chain != "all")
    errs.push_back("degiorgi.chain: must be none|final|all");
  if (params.levels < 1) errs.push_back("params.levels: must be >= 1");
  return errs;
}

Grid ExperimentConfig::make_grid() const {
  Grid g;
  g.dim = grid.dim;
  g.nt = grid.nt;
  g.t_min = grid.t_min;
  g.t_max = grid.t_max;
  double xe = grid.x_extent, ve = grid.v_extent;
  if (xe <= 0.0 || ve <= 0.0) {
    if (campaign == "weak-harnack" || campaign == "dual-spreading") {
      const double R =
          std::max(harnack.c_r * std::pow(1.0 + harnack.delta_s, harnack.beta_sup), 1.05);
      const double rho = sigma_radius(R);
      if (xe <= 0.0) xe = 2.0 * rho + grid.pad;
      if (ve <= 0.0) ve = rho + grid.pad;
    } else {
      if (xe <= 0.0) xe = 2.0 * cylinders.outer_r + grid.pad;
      if (ve <= 0.0) ve = cylinders.outer_r + grid.pad;
    }
  }
  for (int a = 0; a < g.dim; ++a) {
    g.nx[a] = grid.nx;
    g.nv[a] = grid.nv;
    g.x_min[a] = -xe;
    g.x_max[a] = xe;
    g.v_min[a] = -ve;
    g.v_max[a] = ve;
  }
  return g;
}

} // namespace hypoharnack
