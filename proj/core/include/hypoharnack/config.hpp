#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypoharnack/coefficients.hpp"
#include "hypoharnack/degiorgi.hpp"
#include "hypoharnack/grid.hpp"

namespace hypoharnack {

/// Declarative experiment configuration (single JSON file, nested key-value).
/// Identical config + seed reproduces byte-identical CSV/JSON artifacts.
struct ExperimentConfig {
  std::string campaign = "kernel-validate";
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string output_dir = "out";

  struct GridCfg {
    int dim = 1;
    int nt = 64, nx = 64, nv = 64;
    double t_min = -1.0, t_max = 0.0;
    double x_extent = 0.0; // 0 = auto per campaign
    double v_extent = 0.0;
    double pad = 0.5;
  } grid;

  CoefficientRecipe coefficients;
  Exponents exponents;

  struct CylCfg {
    double inner_s = 0.5, inner_r = 1.0;
    double outer_s = 1.0, outer_r = 2.0;
  } cylinders;

  struct DeGiorgiCfg {
    int max_iters = 25;
    double z_tol_rel = 1e-10;
    double d_cap = 65536.0;
    int dict_size = 24;
    std::string chain = "final"; // none | final | all
    double ordering_tol = 1e-8;
    double beta_series = 0.9;
  } degiorgi;

  struct HarnackCfg {
    double c_r = 0.4;
    double beta_sup = 1.0;
    double eta = 0.25;
    double delta_s = 2.5;
    double Delta = 8.0;
    int delta_max_j = 20;
    double evo_rtol = 0.1;
  } harnack;

  struct Params {
    int trials = 50;
    int levels = 2;
    std::vector<double> eps_visc{1e-1, 1e-2, 1e-3};
    std::vector<double> kernel_taus{0.1, 0.5, 1.0};
    double u0_amplitude = 2.0;
    double omega_radius = 0.0; // 0 = auto (0.7 of the box)
  } params;

  struct Acceptance {
    double kernel_norm_tol = 1e-6;
    double kernel_order_min = 1.8;
    double hyp1_stability = 0.2;
    double wmp_tol = 1e-8;
    double sup_sound_factor = 10.0;
    double sup_stability = 0.3;
    double mu_stability = 0.25;
    double viscous_energy_spread = 2.0;
  } acceptance;

  static ExperimentConfig defaults_for(const std::string& campaign);
  /// Parse over campaign defaults; unknown keys are an error (field path named).
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  /// Fully resolved config, stable key order.
  std::string to_json_text() const;

  /// Empty when valid; otherwise one message per violated constraint, naming
  /// the field path / inequality.
  std::vector<std::string> validate() const;

  /// Grid with campaign-appropriate auto extents.
  Grid make_grid() const;
};

} // namespace hypoharnack
