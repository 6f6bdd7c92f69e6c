#pragma once

#include <memory>

#include "hypoharnack/coefficients.hpp"
#include "hypoharnack/geometry.hpp"
#include "hypoharnack/grid.hpp"

namespace hypoharnack {

/// Options of the shared backward-Euler stepper. The discrete operator of one
/// step, acting on the level-n slice with level n-1 as data, is
///
///   Lop(u^n) = (u^n - u^{n-1})/dt + v . Dupw_x u^n
///              - Dminus_i(a^{ij} Dplus_j u^n) - Dminus_i(b^i u^n)
///              - c^i Dplus_i u^n - d u^n
///              [- eps (Dxx + Dvv) u^n - div(ext_weight grad u^n)]
///
/// with zero-extension (Dirichlet) outside the box. Upwind transport plus
/// centered diffusion keeps every step an M-matrix when the lower-order
/// fields vanish, which is what the comparison arguments rely on.
struct SchemeOptions {
  DriftKind drift = DriftKind::Kinetic;
  bool include_transport = true;
  const RoughCoefficients* coeffs = nullptr; // null: a = Id, no lower order
  bool include_lower_order = true;
  double extra_viscosity = 0.0;     // eps Laplacian in all 2*dim directions
  const GridField* ext_weight = nullptr; // (1-chi)^2 for the extended operator
};

class ImplicitStepper {
public:
  ImplicitStepper(const Grid& g, const SchemeOptions& opt);
  ~ImplicitStepper();
  ImplicitStepper(ImplicitStepper&&) noexcept;

  /// Solve Lop(u^n) = rhs_n for the level-n slice. rhs_n may be null (zero).
  void step(int n, const double* u_prev, const double* rhs_n, double* u_n);

  /// Lop(u^n) given both slices (strong residual of the step operator).
  void apply(int n, const double* u_n, const double* u_prev, double* out);

  const Grid& grid() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// March the scheme over levels t_begin+1 .. nt with u(t_begin) = init
/// (null: zero) and per-level right-hand side from rhs (null: zero).
/// Levels < t_begin are zero in the result.
GridField implicit_solve(const Grid& g, const SchemeOptions& opt, const GridField* rhs,
                         int t_begin = 0, const double* init = nullptr);

/// out = Dminus_axis(in) on one slice (backward difference in velocity axis,
/// zero extension). This is the discrete X_i^t.
void apply_xit(const Grid& g, int axis, const double* in, double* out);

/// out = Dplus_axis(in) on one slice (forward difference in velocity axis,
/// zero extension). This is the discrete X_i.
void apply_xi(const Grid& g, int axis, const double* in, double* out);

/// Full strong residual field of P: R = Lop(u) + Dminus_i f^i + g on levels
/// >= 1 (zero where not computed). coeffs may be null (f = g = 0).
GridField scheme_residual(const Grid& g, const SchemeOptions& opt, const GridField& u);

} // namespace hypoharnack
