#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypoharnack/grid.hpp"

namespace hypoharnack {

/// Rough coefficient tuple (a^{ij}, b^i, c^i, d, f^i, g) of the operator
///   P u = X0 u - X_i^t (a^{ij} X_j u + b^i u - f^i) - (c^i X_i u + d u - g)
/// together with the ellipticity floor lambda and the pointwise bound field
/// Lambda (|a^{ij}| <= Lambda/n, n = 2*dim). Empty GridFields mean zero.
struct RoughCoefficients {
  int dim = 1;
  double lambda = 1.0;
  std::vector<GridField> a; // dim*dim entries, row-major; empty -> identity
  std::vector<GridField> b; // dim entries or empty
  std::vector<GridField> c;
  std::vector<GridField> f;
  GridField d;
  GridField g;
  GridField Lambda;
  bool time_constant = true;

  bool identity_a() const { return a.empty(); }
  double a_at(int n, std::int64_t j, int i, int jj) const {
    if (a.empty()) return i == jj ? 1.0 : 0.0;
    return a[static_cast<std::size_t>(i) * dim + jj].at(n, j);
  }
  double b_at(int n, std::int64_t j, int i) const { return b.empty() ? 0.0 : b[i].at(n, j); }
  double c_at(int n, std::int64_t j, int i) const { return c.empty() ? 0.0 : c[i].at(n, j); }
  double f_at(int n, std::int64_t j, int i) const { return f.empty() ? 0.0 : f[i].at(n, j); }
  double d_at(int n, std::int64_t j) const { return d.data.empty() ? 0.0 : d.at(n, j); }
  double g_at(int n, std::int64_t j) const { return g.data.empty() ? 0.0 : g.at(n, j); }
  double Lambda_at(int n, std::int64_t j) const {
    return Lambda.data.empty() ? 2.0 * dim : Lambda.at(n, j);
  }
  bool has_lower_order() const {
    return !b.empty() || !c.empty() || !d.data.empty() || !f.empty() || !g.data.empty();
  }
};

/// Deterministic coefficient construction from a recipe (config surface).
struct CoefficientRecipe {
  std::string kind = "identity"; // identity | checkerboard | random
  double lambda = 1.0;
  double lambda_max = 4.0; // diagonal values drawn in [lambda, lambda_max]
  int blocks = 8;          // checkerboard blocks per axis
  std::uint64_t seed = 1;
  bool time_constant = true;
  // lower-order amplitude per field; piecewise-constant random blocks
  double amp_b = 0.0, amp_c = 0.0, amp_d = 0.0, amp_f = 0.0, amp_g = 0.0;
};

RoughCoefficients make_coefficients(const Grid& g, const CoefficientRecipe& r);

struct EllipticityReport {
  bool ok = false;
  double min_eig_slack = 0.0; // min over grid of (eigmin(sym a) - lambda)
  double max_bound_ratio = 0.0;  // max over grid of |a^{ij}| n / Lambda
  std::int64_t worst_cell = -1;
  int worst_level = -1;
};

/// Checks lambda Id <= sym(a) and |a^{ij}| <= Lambda/n cellwise.
EllipticityReport check_ellipticity(const RoughCoefficients& coeffs);

} // namespace hypoharnack
