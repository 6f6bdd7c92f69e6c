#pragma once

#include <cstdint>
#include <vector>

#include "hypoharnack/coefficients.hpp"
#include "hypoharnack/grid.hpp"
#include "hypoharnack/schemes.hpp"
#include "hypoharnack/transforms.hpp"

namespace hypoharnack {

/// Weak pairing <P u, phi> = sum R(u) phi over space-time cells, where R is
/// the strong residual of the step scheme; equal to the integrated-by-parts
/// form for interior test functions because the discrete transposes are
/// exact. phi must vanish at the first two and the last time level and
/// within one cell of the spatial walls (throws otherwise).
double apply_weak(const RoughCoefficients& coeffs, const GridField& u, const GridField& phi);

/// Compact tensor-product C^2 bump on the grid: product over (t, x_a, v_a) of
/// (1 - s^2)^3 with per-axis half-widths in cells. Nonnegative, interior.
struct Bump {
  int ct = 0, wt = 1;
  std::array<int, kMaxDim> cx{}, cv{};
  int wx = 1, wv = 1;

  double eval(const Grid& g, int n, const SpatialIdx& idx) const;
  bool supports(int n) const { return n > ct - wt && n < ct + wt; }
};

/// Deterministic dictionary of nonnegative tensor bumps at 3 dyadic scales on
/// interior cells; at most `size` entries (stratified over scales/centers).
std::vector<Bump> make_dictionary(const Grid& g, int size);

enum class SignCertificate { Subsolution, Supersolution, Neither };

struct WeakResidual {
  std::vector<double> values;    // <P u, phi_k>
  std::vector<double> phi_norms; // ||phi_k||_{L2}
  double worst_pos = 0.0;        // max_k value_k / ||phi_k||
  double worst_neg = 0.0;        // min_k value_k / ||phi_k||
  int worst_phi = -1;            // index attaining worst_pos
  double tol = 1e-6;
  SignCertificate certificate = SignCertificate::Neither;
};

/// Dictionary certification of the sign of P u: Subsolution when every
/// pairing is <= tol ||phi||, Supersolution when every pairing >= -tol ||phi||.
WeakResidual certify_sign(const RoughCoefficients& coeffs, const GridField& u,
                          int dictionary_size, double tol = 1e-6);

/// Manufactured solution of P u = 0: backward-Euler march with u(t_min) = u0
/// (a level-0 slice field). Fully implicit upwind transport keeps the step an
/// M-matrix, so nonnegativity is preserved for f = 0, g <= 0 data.
struct EvolveResult {
  GridField u;
  double residual_max = 0.0; // max interior |P u| (solver roundoff scale)
  double cfl = 0.0;          // max |v| dt / hx, resolution guard
};
EvolveResult evolve(const RoughCoefficients& coeffs, const GridField& u0_level0);

/// Composition lemma: v = Phi(u) with new coefficients
///   a~ = a, b~ = 0, c~ = c, d~ = 0,
///   f~ = Phi'(u)(f - b u),
///   g~ = Phi'(u)(g - d u) - (Phi''(u)/2 lambda) |f - b u|^2,
/// and defect = Phi''(u) (lambda/2) |X u|^2 with P~ v <= -defect.
/// supersolution_input selects the (P u >= 0, Phi' <= 0) variant; the sign
/// conditions of Phi are validated against it.
struct ComposeResult {
  GridField v;
  RoughCoefficients new_coeffs;
  GridField defect;
  GridField u;                // retained for chain-consistent certification
  std::vector<GridField> fb;  // (f - b u) per direction, likewise
  GridField gd;               // g - d u
  Transform phi;
  bool supersolution_input = false;
};
ComposeResult compose_transform(const RoughCoefficients& coeffs, const GridField& u,
                                const Transform& phi, bool supersolution_input = false);

/// Chain-consistent certification of the transformed field: evaluates
/// <P~ v, phi> with X_i v = Phi'(u) X_i u and the Young term of g~ placed at
/// the cells the discrete Leibniz rule dictates, together with the defect
/// pairing. With these quadratures the lemma's inequality holds to roundoff
/// for arbitrary rough coefficients, so the reported certificate reflects the
/// lemma rather than truncation noise.
struct ChainCertification {
  WeakResidual plain;           // <P~ v, phi> (chain quadrature)
  WeakResidual with_defect;     // <P~ v, phi> + <defect_chord, phi_+>
  WeakResidual strengthened;    // + (lambda/2)|X v|^2 pairing (log transform)
  bool strengthened_checked = false;
};
ChainCertification certify_compose(const ComposeResult& cr, int dictionary_size,
                                   double tol = 1e-6, bool check_strengthened = false);

} // namespace hypoharnack
