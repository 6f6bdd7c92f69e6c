#pragma once

#include <string>
#include <vector>

#include "hypoharnack/degiorgi.hpp"
#include "hypoharnack/geometry.hpp"
#include "hypoharnack/kolmogorov.hpp"
#include "hypoharnack/report.hpp"
#include "hypoharnack/rough.hpp"
#include "hypoharnack/transforms.hpp"

namespace hypoharnack {

/// L1 gain (log-transform energy step): integrates the evolution of
/// E(t) = int v eta_R^2 dx and verifies the slice-wise differential
/// inequality; lhs = ||X v||^2_{L2(SigmaTilde_R)},
/// rhs = C(R) G_delta(0) + ||Lambda||^2_{L2(Sigma_R)} + ||f~||_{L1(Sigma_R)}
///       + ||c~||^2_{L2(Sigma_R)} + ||g~||_{L1(Sigma_R)}.
EstimateReport l1_gain(const ComposeResult& vres, const SigmaDomains& sig,
                       double g_delta_zero, double evo_rtol = 0.1);

/// Dual comparison: checks v 1_E = 0, tracks K(t) = int v w eta~_R dx, uses
/// the Hessian bound of the small-cutoff hypothesis for the
/// G_delta(0) ||w||_L1 / R term, and converts sup K to the L1 norm of v over
/// C_{1/2,2} through mu0. lhs = ||v||^2_{L1(C_{1/2,2})}, rhs per the
/// dual-gain display with unit constants.
EstimateReport dual_gain(const ComposeResult& vres, const DualProblem& dual,
                         const SigmaDomains& sig, const Exponents& exps, double mu0,
                         double g_delta_zero, const GridField& E_indicator);

struct HarnackOptions {
  double c_r = 0.4;      // weak-Harnack scale constant C_R (calibration, cached in config)
  double beta_sup = 1.0; // calibrated beta of the supremum bound
  int delta_max_j = 20;  // delta sweep 2^{-j}, j = 1..delta_max_j
  int dict_size = 24;
  double tol = 1e-8;
  double evo_rtol = 0.1;
  SupOptions sup;
};

struct HarnackCertificate {
  bool passed = false;
  double mu = 0.0;
  double delta = 0.0;
  double eps_data = 0.0;
  double R = 0.0;
  double eta = 0.0;          // measured |E| / |C_{1,1} cap {t <= -2/3}|
  double mu0 = 0.0;          // dual positivity floor on C_{1/2,2}
  double delta_s = 0.0;      // measured ||Lambda||_{q_Lambda} + ||c||_{q_c} on C_{1/2,2}
  double Delta = 0.0;        // measured ||Lambda||_{q_bar2} + ||c~||_{q_bar2} on Sigma_R
  double certified_sup_v = 0.0;
  double g_delta_zero = 0.0;
  double u_min_inner = 0.0;  // grid min of u over C_{1/3,1}
  bool sound = false;        // mu <= u_min_inner (+tol)
  std::vector<EstimateReport> chain;
  std::string failure;
};

std::string certificate_to_json(const HarnackCertificate& c);

/// Weak-Harnack pipeline: measure condition on E = {u >= 1}, coefficient
/// smallness, dual solve, then the delta-shrinking loop running
/// compose(G_delta) -> l1_gain -> dual_gain -> supremum_bound(v) until the
/// certified sup of v closes below (3/4) G_delta(0); mu solves
/// G_delta(mu) = min((3/4) G_delta(0), certified sup).
HarnackCertificate weak_harnack(const GridField& u, const RoughCoefficients& coeffs,
                                double eta, double delta_s_in, double Delta_in,
                                const Exponents& exps, const HarnackOptions& opts = {});

} // namespace hypoharnack
