#pragma once

#include <cstdint>
#include <vector>

#include "hypoharnack/geometry.hpp"
#include "hypoharnack/grid.hpp"
#include "hypoharnack/kernel.hpp"
#include "hypoharnack/report.hpp"
#include "hypoharnack/schemes.hpp"

namespace hypoharnack {

/// Smooth constant-coefficient problem (X0 - L0^ext) w = G + sum_i X_i^t F^i
/// with w = 0 at t_init and on the lateral boundary of the box (the box
/// truncates R^n; kernel tails control the error). Sources are masked to
/// t > t_init.
struct SmoothProblem {
  Grid grid;
  GridField G;
  std::vector<GridField> F; // dim entries or empty
  double t_init = 0.0;

  int t_init_level() const;
};

/// Monotone implicit solve (backward Euler, upwind transport, centered
/// velocity diffusion). residual_out, when given, receives the max interior
/// residual of the discrete equation (solver roundoff scale).
GridField solve_smooth_ivp(const SmoothProblem& pb, double* residual_out = nullptr);

/// The gain-of-integrability probe: over `trials` random smooth (G, F) pairs
/// supported in omega cap {t >= t_init}, measures
/// ||w||_{p1} / (||G||_{gamma0} + ||F||_{gamma1}) and reports the max ratio
/// per refinement level (levels = base grid, then 1.5x cells per axis).
struct Hypothesis1Probe {
  Grid grid;         // base level grid
  Cylinder omega;    // zero-drift cylinder = (t1, t2] x ball
  double t_init = 0.0;
  double p1 = 2.5, gamma0 = 2.0, gamma1 = 2.0;
  int trials = 50;
  int levels = 2;
  std::uint64_t seed = 1;
};
EstimateReport probe_hypothesis1(const Hypothesis1Probe& probe);

/// Dual problem (X0^t - L0) w = 1_E on (-1, 0] x R^n, w(-1, .) = 0. For the
/// kinetic drift the transpose keeps the transport term (divergence-free).
struct DualProblem {
  GridField w;
  double residual = 0.0;
  double mass_l1 = 0.0; // ||w||_{L1((-1,0) x R^n)}
};

/// E must be an indicator supported in C_{1,1}(base) cap {t <= -2/3}
/// (checked; throws std::invalid_argument otherwise).
DualProblem solve_dual(const Grid& g, const GridField& E_indicator, const PhasePoint& base);

/// Random-set spreading probe: min_{C_{1/2,2}} w (empirical mu0), ||w||_{L1},
/// and the L^{p2} norms of w and Xw over Sigma_R, for `trials` random E with
/// |E| >= eta |C_{1,1} cap {t <= -2/3}|.
struct DualSpreadingProbe {
  Grid grid;
  PhasePoint base;
  double eta = 0.25;
  double p2 = 4.0;
  double R = 2.0;
  int trials = 8;
  int levels = 2;
  std::uint64_t seed = 1;
};
EstimateReport probe_dual_spreading(const DualSpreadingProbe& probe);

/// Build a random admissible indicator with measure >= eta * |region| where
/// region = C_{1,1}(base) cap {t <= -2/3}; deterministic in the seed.
GridField random_admissible_set(const Grid& g, const PhasePoint& base, double eta,
                                std::uint64_t seed, double* measure_out = nullptr,
                                double* region_measure_out = nullptr);

/// Weak maximum principle check: w0 must satisfy Lop(w0) <= tol cellwise
/// (discrete subsolution of X0 - L0^ext) with zero initial data; then
/// max w0 <= tol. Reports the violating point otherwise.
struct MaxPrincipleReport {
  bool passed = false;
  bool is_subsolution = false;
  double max_value = 0.0;
  double max_residual = 0.0; // largest positive residual
  int worst_level = -1;
  std::int64_t worst_cell = -1;
  double tol = 1e-8;
};
MaxPrincipleReport weak_max_principle_check(const GridField& w0, double tol = 1e-8);

/// Appendix-B vanishing-viscosity solve of
/// (X0 - L0 - div((1-chi)^2 grad .) - eps Delta) w = G + X_i^t F^i
/// with zero initial/lateral data, plus the uniform energy norms.
struct ViscousSolution {
  GridField w;
  double norm_l2 = 0.0;
  double norm_xgrad = 0.0;    // ||X w||_L2
  double norm_extgrad = 0.0;  // ||(1-chi) grad w||_L2 (all 2 dim directions)
};
ViscousSolution viscous_comparison(double eps_visc, const SmoothProblem& pb,
                                   const CutoffField& chi);

} // namespace hypoharnack
