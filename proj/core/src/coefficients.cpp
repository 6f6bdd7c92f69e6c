#include "hypoharnack/coefficients.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hypoharnack {

namespace {

// Block index of a cell for the piecewise-constant (checkerboard/random)
// recipes: the box is split into `blocks` slabs per axis, plus `blocks`
// slabs in time unless time_constant.
std::uint64_t block_key(const Grid& g, int n, const SpatialIdx& idx, int blocks,
                        bool time_constant) {
  std::uint64_t key = 0;
  auto fold = [&](int cell, int ncells) {
    const int bidx = std::min(blocks - 1, cell * blocks / ncells);
    key = key * 64 + static_cast<std::uint64_t>(bidx);
  };
  if (!time_constant) fold(std::max(0, n - 1), g.nt);
  for (int a = 0; a < g.dim; ++a) fold(idx.ix[a], g.nx[a]);
  for (int a = 0; a < g.dim; ++a) fold(idx.iv[a], g.nv[a]);
  return key;
}

// splitmix64: deterministic block value from (seed, key, field tag)
double block_uniform(std::uint64_t seed, std::uint64_t key, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (key + 1) + 0xbf58476d1ce4e5b9ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0); // [0,1)
}

} // namespace

RoughCoefficients make_coefficients(const Grid& g, const CoefficientRecipe& r) {
  RoughCoefficients out;
  out.dim = g.dim;
  out.lambda = r.lambda;
  out.time_constant = r.time_constant;
  const int n_amb = 2 * g.dim;
  const std::int64_t S = g.slice_size();

  if (r.kind != "identity") {
    out.a.assign(static_cast<std::size_t>(g.dim) * g.dim, GridField(g));
    out.Lambda = GridField(g);
    for (int n = 0; n <= g.nt; ++n) {
      for (std::int64_t j = 0; j < S; ++j) {
        const SpatialIdx idx = g.spatial_unflat(j);
        const std::uint64_t key = block_key(g, n, idx, r.blocks, r.time_constant);
        double diag;
        if (r.kind == "checkerboard") {
          // alternate lambda / lambda_max by block parity
          std::uint64_t parity = 0, k = key;
          while (k > 0) {
            parity ^= k & 1;
            k /= 64;
          }
          // high blocks carry a deterministic jitter in the upper half-range
          diag = parity ? r.lambda + (r.lambda_max - r.lambda) *
                                         (0.5 + 0.5 * block_uniform(r.seed, key, 0))
                        : r.lambda;
        } else { // random
          diag = r.lambda + (r.lambda_max - r.lambda) * block_uniform(r.seed, key, 0);
        }
        double amax = 0.0;
        for (int i = 0; i < g.dim; ++i)
          for (int jj = 0; jj < g.dim; ++jj) {
            const double val = (i == jj) ? diag : 0.0;
            out.a[static_cast<std::size_t>(i) * g.dim + jj].at(n, j) = val;
            amax = std::max(amax, std::fabs(val));
          }
        out.Lambda.at(n, j) = n_amb * amax;
      }
    }
  } else {
    out.Lambda = GridField(g, static_cast<double>(n_amb));
  }

  auto fill_block_field = [&](double amp, std::uint64_t tag) {
    GridField f(g);
    if (amp != 0.0)
      for (int n = 0; n <= g.nt; ++n)
        for (std::int64_t j = 0; j < S; ++j) {
          const SpatialIdx idx = g.spatial_unflat(j);
          const std::uint64_t key = block_key(g, n, idx, r.blocks, r.time_constant);
          f.at(n, j) = amp * (2.0 * block_uniform(r.seed, key, tag) - 1.0);
        }
    return f;
  };

  if (r.amp_b != 0.0) {
    out.b.resize(g.dim);
    for (int i = 0; i < g.dim; ++i) out.b[i] = fill_block_field(r.amp_b, 10 + i);
  }
  if (r.amp_c != 0.0) {
    out.c.resize(g.dim);
    for (int i = 0; i < g.dim; ++i) out.c[i] = fill_block_field(r.amp_c, 20 + i);
  }
  if (r.amp_f != 0.0) {
    out.f.resize(g.dim);
    for (int i = 0; i < g.dim; ++i) out.f[i] = fill_block_field(r.amp_f, 30 + i);
  }
  if (r.amp_d != 0.0) out.d = fill_block_field(r.amp_d, 40);
  if (r.amp_g != 0.0) out.g = fill_block_field(r.amp_g, 50);
  return out;
}

EllipticityReport check_ellipticity(const RoughCoefficients& coeffs) {
  EllipticityReport rep;
  rep.min_eig_slack = std::numeric_limits<double>::infinity();
  rep.max_bound_ratio = 0.0;
  const Grid* gp = nullptr;
  if (!coeffs.a.empty())
    gp = &coeffs.a[0].grid;
  else if (!coeffs.Lambda.data.empty())
    gp = &coeffs.Lambda.grid;
  if (!gp) { // identity everywhere, Lambda defaulted: slack is 1 - lambda
    rep.min_eig_slack = 1.0 - coeffs.lambda;
    rep.max_bound_ratio = 1.0;
    rep.ok = rep.min_eig_slack >= 0.0;
    return rep;
  }
  const Grid& g = *gp;
  const std::int64_t S = g.slice_size();
  const int n_amb = 2 * g.dim;
  for (int n = 0; n <= g.nt; ++n)
    for (std::int64_t j = 0; j < S; ++j) {
      double eigmin;
      double amax = 0.0;
      if (g.dim == 1) {
        eigmin = coeffs.a_at(n, j, 0, 0);
        amax = std::fabs(eigmin);
      } else {
        const double a11 = coeffs.a_at(n, j, 0, 0), a22 = coeffs.a_at(n, j, 1, 1);
        const double s12 = 0.5 * (coeffs.a_at(n, j, 0, 1) + coeffs.a_at(n, j, 1, 0));
        const double tr = a11 + a22;
        const double disc = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * s12 * s12);
        eigmin = 0.5 * (tr - disc);
        for (int i = 0; i < 2; ++i)
          for (int jj = 0; jj < 2; ++jj) amax = std::max(amax, std::fabs(coeffs.a_at(n, j, i, jj)));
      }
      const double slack = eigmin - coeffs.lambda;
      if (slack < rep.min_eig_slack) {
        rep.min_eig_slack = slack;
        rep.worst_cell = j;
        rep.worst_level = n;
      }
      const double lam = coeffs.Lambda_at(n, j);
      const double ratio = lam > 0.0 ? amax * n_amb / lam : std::numeric_limits<double>::infinity();
      rep.max_bound_ratio = std::max(rep.max_bound_ratio, ratio);
    }
  rep.ok = rep.min_eig_slack >= -1e-12 && rep.max_bound_ratio <= 1.0 + 1e-12;
  return rep;
}

} // namespace hypoharnack
