#pragma once

#include <string>
#include <utility>

#include "hypoharnack/grid.hpp"

namespace hypoharnack {

enum class DriftKind {
  Kinetic, // X~0 = v . grad_x (divergence-free)
  Zero,    // no drift, degenerate test case
};

/// Characteristic flow of the drift from t_from to t_to applied to p.
/// Kinetic: (pos, vel) -> (pos + (t_to - t_from) vel, vel). Exact group law.
PhasePoint flow(DriftKind drift, double t_from, double t_to, const PhasePoint& p);

/// Drift-aligned parabolic cylinder Q_{s,r}(t0, x0): transport of the open
/// Euclidean ball B_r(x0) in (pos, vel), over the half-open window
/// (t0 - s, t0].
struct Cylinder {
  PhasePoint base;
  double s = 1.0;
  double r = 1.0;
  DriftKind drift = DriftKind::Kinetic;
  int dim = 1;

  bool contains(const PhasePoint& q) const;
};

/// s * vol(B_r) for divergence-free drifts; otherwise integrates the flow
/// Jacobian numerically over the time window.
double cylinder_measure(const Cylinder& c);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

enum class CutoffKind { Spatial, Temporal };
enum class RadialProfile {
  Shell,     // 1 -> 0 across [inner, outer] via a quintic smoothstep (C^2)
  FlatHess,  // piecewise-quadratic, |p''| = 4/gap^2 a.e. (C^{1,1}); the
             // profile realizing the 1/R Hessian bound of the Sigma cutoffs
};

/// A cutoff with closed-form profile. Spatial cutoffs are transported along
/// the drift (X0 eta = 0 exactly); temporal cutoffs depend on t only.
/// inner/outer are radii for Spatial and times (s1, s2) for Temporal.
struct CutoffField {
  CutoffKind kind = CutoffKind::Spatial;
  RadialProfile profile = RadialProfile::Shell;
  DriftKind drift = DriftKind::Kinetic;
  PhasePoint base;
  int dim = 1;
  double inner = 0.0;
  double outer = 1.0;
  std::pair<double, double> window{-1.0, 0.0}; // metadata for spatial cutoffs

  double eval(const PhasePoint& p) const;
  /// Temporal value/derivative as functions of t alone.
  double eval_time(double t) const;
  double ddt_time(double t) const;
  /// X_i eta (derivatives along the velocity fields), exact chain rule
  /// through the transport map. out must hold dim entries.
  void grad_v(const PhasePoint& p, double* out) const;
  /// X_i X_j eta; out is row-major dim x dim.
  void hess_v(const PhasePoint& p, double* out) const;

  GridField sample_on(const Grid& g) const;
};

/// eta = 1 on Q_{S,r1}(base), 0 outside Q_{S,r2}(base), transported so that
/// X0 eta = 0. Throws std::invalid_argument if r1 >= r2.
CutoffField make_spatial_cutoff(double r1, double r2, std::pair<double, double> window,
                                const PhasePoint& base, int dim,
                                DriftKind drift = DriftKind::Kinetic);

/// tau(t) = 0 for t <= s1, 1 for t >= s2, C^2 monotone bridge with
/// ||tau'||_inf <= C/(s2-s1). Throws std::invalid_argument if s1 >= s2.
CutoffField make_temporal_cutoff(double s1, double s2);

/// The enlarged domains of the small-cutoff hypothesis, realized as
/// drift-aligned cylinders Q_{1,rho}(base): C_{1,2} subset SigmaTilde subset
/// Sigma subset [-1,0] x R^n, with transported cutoffs obeying
/// ||X eta~|| <= 1, ||XX eta~|| <= 1/R, ||X eta|| <= 1.
struct SigmaDomains {
  double R = 2.0;
  Cylinder sigma_tilde;
  Cylinder sigma;
  CutoffField eta_tilde; // == 1 on C_{1,2}, quadratic-cap shell to rho_tilde(R)
  CutoffField eta;       // == 1 on SigmaTilde, shell to rho(R)
};

/// Radii used by sigma_domains; exposed for grid sizing.
double sigma_tilde_radius(double R);
double sigma_radius(double R);

/// Throws std::invalid_argument if R <= 1.
SigmaDomains sigma_domains(double R, const PhasePoint& base, int dim);

/// JSON descriptors {base, s, r, drift, kind, scales} for experiment
/// manifests.
std::string cylinder_to_json(const Cylinder& c);
Cylinder cylinder_from_json(const std::string& text);
std::string cutoff_to_json(const CutoffField& c);
CutoffField cutoff_from_json(const std::string& text);

} // namespace hypoharnack
