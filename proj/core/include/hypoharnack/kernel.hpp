#pragma once

#include <vector>

#include "hypoharnack/grid.hpp"

namespace hypoharnack {

/// Fundamental solution of X0 - L0 = d_t + v.grad_x - Delta_v for the kinetic
/// drift. Gaussian with the degenerate covariance of the Kolmogorov
/// semigroup; per (x_i, v_i) pair, with tau = t - s, xi = x - y - tau*w,
/// zeta = v - w:
///
///   Gamma = sqrt(3)/(2 pi tau^2) exp(-3 xi^2/tau^3 + 3 xi zeta/tau^2 - zeta^2/tau)
///
/// Validated only through the quadrature/residual oracles (normalization,
/// PDE residual, concentration, Chapman-Kolmogorov) before use.
struct KernelSpec {
  int dim = 1; // d_x = d_v
};

/// Gamma(t, p; s, q). Throws std::invalid_argument if t <= s.
double fundamental_solution(const KernelSpec& spec, double t, const PhasePoint& p, double s,
                            const PhasePoint& q);

/// d/d q.vel_i of Gamma (source-velocity gradient, used for the X_i^t F
/// Duhamel term): (3 xi_i / tau^2 - zeta_i / tau) * Gamma.
void fundamental_solution_grad_source_vel(const KernelSpec& spec, double t, const PhasePoint& p,
                                          double s, const PhasePoint& q, double* out);

/// Quadrature of Gamma(t, .; s, q) over the full (pos, vel) space on a box
/// adapted to the kernel scales (midpoint rule, n_per_axis points per axis).
double kernel_mass(const KernelSpec& spec, double tau, int n_per_axis = 400);

/// Gamma-weighted mean of (pos, vel) at time t for a source at (s, q);
/// concentrates at flow(s -> t, q) as tau -> 0. out holds 2*dim entries.
void kernel_mean(const KernelSpec& spec, double tau, const PhasePoint& q, int n_per_axis,
                 double* out);

/// Centered finite-difference residual |(d_t + v d_x - Delta_v) Gamma| at
/// (t, p) for source (s, q) with step h.
double kernel_fd_residual(const KernelSpec& spec, double t, const PhasePoint& p, double s,
                          const PhasePoint& q, double h);

/// Chapman-Kolmogorov defect |Gamma(t,p;s,q) - int Gamma(t,p;m,r) Gamma(m,r;s,q) dr|
/// by midpoint quadrature at the intermediate time m.
double kernel_chapman_defect(const KernelSpec& spec, double t, const PhasePoint& p, double s,
                             const PhasePoint& q, double m, int n_per_axis = 200);

/// Homogeneous propagation of level-0 data by kernel quadrature (oracle-grade,
/// O(nt * S^2); use small grids).
GridField kernel_convolve_initial(const Grid& g, const GridField& u0_level0);

/// Duhamel solution of (X0 - L0) w = G + sum_i d_{v_i} F_i, w(t_init) = 0, by
/// kernel quadrature (sources sampled on the grid; F may be empty).
GridField kernel_convolve_source(const Grid& g, const GridField& G, const std::vector<GridField>& F,
                                 double t_init);

} // namespace hypoharnack
