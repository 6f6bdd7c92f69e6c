#pragma once

#include <string>
#include <vector>

#include "hypoharnack/geometry.hpp"
#include "hypoharnack/norms.hpp"
#include "hypoharnack/report.hpp"
#include "hypoharnack/rough.hpp"
#include "hypoharnack/transforms.hpp"

namespace hypoharnack {

/// Integrability bookkeeping of the supremum bound. Infinite exponents are
/// allowed (gamma = 2 forces q_Lambda, q_c = inf).
struct Exponents {
  double p0 = 2.2;
  double p1 = 2.5;
  double p2 = 4.0;
  double gamma0 = 2.0;
  double gamma1 = 2.0;
  double q_lambda = kInfExponent;
  double q_b = 44.0;
  double q_c = kInfExponent;
  double q_d = 22.0;
  double q_bar0 = 22.0; // 1/q_bar0 + 1/p0 = 1/2
  double q_bar2 = 4.0;  // 1/q_bar2 + 1/p2 = 1/2

  static double inv(double q) { return q == kInfExponent ? 0.0 : 1.0 / q; }
  double q0() const { return inv(gamma0) - 0.5 > 0 ? 1.0 / (inv(gamma0) - 0.5) : kInfExponent; }
  double q1() const { return inv(gamma1) - 0.5 > 0 ? 1.0 / (inv(gamma1) - 0.5) : kInfExponent; }
  double p0_star() const { return p0 / (p0 - 1.0); }
  double theta() const { return (1.0 - 1.0 / p0) / (1.0 - 1.0 / p1); }
  double iteration_delta() const { return 1.0 - p0 / p1; }
};

/// Empty when every supremum-bound exponent constraint holds; otherwise one message per
/// violated inequality, naming it.
std::vector<std::string> validate_exponents(const Exponents& e);

/// delta_S = ||Lambda||_{q_Lambda} + ||b||_{q_b} + ||c||_{q_c} + ||d||_{q_d}
/// over the region.
double measure_delta_s(const RoughCoefficients& coeffs, const RegionWeights& region,
                       const Exponents& e);

/// Step-1 energy estimate (L2 gradient control of the truncated field):
/// lhs = ||X v||^2_{L2(inner)},
/// rhs = (1 + 1/(S-s) + 1/(R-r))^2 ||(1+Lambda) v||^2 + ||f~||^2 + ||c~ v||^2
///       + ||g~ v||_{L1}, norms over the outer cylinder.
EstimateReport energy_estimate(const ComposeResult& vres, const Cylinder& inner,
                               const Cylinder& outer);

/// Step-2 comparison with the smooth problem. Builds G~, F~ exactly as in the
/// proof, augments G~ by the positive part of the discrete consistency defect
/// so the monotone scheme yields the pointwise ordering tau eta v <= w, then
/// assembles the gain-of-integrability report
/// (lhs = ||v||_{p1(inner)}, rhs = the lemma right-hand side, C2 = ratio).
struct GainResult {
  EstimateReport report;
  double ordering_violation = 0.0; // max over cells of (tau eta v - w)
  bool ordering_ok = false;
  double correction_l1 = 0.0; // ||max(Delta,0)||_{L1}, vanishes under refinement
  double w_p1_inner = 0.0;
};
GainResult gain_integrability(const ComposeResult& vres, const Cylinder& inner,
                              const Cylinder& outer, const Exponents& exps,
                              double ordering_tol = 1e-8);

/// L1 interpolation: nested-scale iteration sigma_i = 1 - beta^i with interpolation
/// absorption; lhs = ||v||_{p1(inner)}, rhs = P^alpha ||v||_{L1(outer)} + Q,
/// alpha = 1/(1-theta). Reports measured C3 and the series convergence flag.
EstimateReport l1_interpolation(const ComposeResult& vres, const Cylinder& inner,
                                const Cylinder& outer, const Exponents& exps,
                                double beta_series = 0.9, int series_steps = 6);

struct IterationState {
  int k = 0;
  double h = 0.0;
  double eps = 0.0;
  double Z = 0.0;
  double M = 0.0;
  double ratio = 0.0; // Z_k / Z_{k-1}^{1+delta}
  bool inclusion_ok = true;
  bool chebyshev_ok = true;
  bool monotone_ok = true;
};

enum class ChainMode { None, Final, All };

struct SupOptions {
  int max_iters = 25;
  double z_tol_rel = 1e-10;
  double d_cap = 65536.0;
  int dict_size = 24;
  ChainMode chain = ChainMode::Final;
  double ordering_tol = 1e-8;
  int bisection_steps = 4;
};

struct SupremumBound {
  bool certified = false;
  double sup_estimate = 0.0;
  double N = 0.0;      // normalization ||u||_1 + ||f||_{q_b} + ||g||_{q_d}
  double d_star = 0.0; // smallest certified level parameter
  double delta_s = 0.0;
  std::vector<IterationState> trace; // of the certified run
  bool invariants_ok = true;
  std::vector<EstimateReport> chain_reports;
  // initial-bound diagnostic: (D, Z_1) per probed candidate; Z_1 should decay
  // at least like D^{1 - p1/p0}
  std::vector<std::pair<double, double>> d_probe;
  std::string failure;
};

/// Local supremum bound: normalizes by N, runs the de Giorgi iteration
/// v_k = K_{eps_k, h_k}(u/N) on shrinking cylinders, searches the smallest D
/// with Z_k -> 0 (doubling then short bisection), and verifies the level-set
/// inclusion and Chebyshev link at every step. Throws std::invalid_argument
/// when the exponent constraints fail.
SupremumBound supremum_bound(const GridField& u, const RoughCoefficients& coeffs,
                             const Cylinder& inner, const Cylinder& outer,
                             const Exponents& exps, const SupOptions& opts = {});

/// Least-squares fit of y = C x^beta through (x_i, y_i) in log space.
std::pair<double, double> fit_power_law(const std::vector<double>& x,
                                        const std::vector<double>& y);

} // namespace hypoharnack
