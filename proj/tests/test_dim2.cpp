#include <doctest.h>

#include <cmath>
#include <random>

#include "hypoharnack/degiorgi.hpp"
#include "hypoharnack/kernel.hpp"
#include "hypoharnack/kolmogorov.hpp"
#include "hypoharnack/rough.hpp"

using namespace hypoharnack;

namespace {

Grid grid2(int nt = 10, int nx = 10, int nv = 8) {
  Grid g;
  g.dim = 2;
  g.nt = nt;
  g.t_min = -1.0;
  g.t_max = 0.0;
  for (int a = 0; a < 2; ++a) {
    g.nx[a] = nx;
    g.nv[a] = nv;
    g.x_min[a] = -3.0;
    g.x_max[a] = 3.0;
    g.v_min[a] = -2.5;
    g.v_max[a] = 2.5;
  }
  return g;
}

} // namespace

TEST_CASE("dim 2: flow, membership oracle, cylinder measure") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Cylinder c;
  c.base = PhasePoint{0.0, {0.1, -0.2}, {0.3, 0.0}};
  c.s = 0.8;
  c.r = 1.1;
  c.dim = 2;
  for (int i = 0; i < 4000; ++i) {
    PhasePoint q{u(rng), {u(rng), u(rng)}, {u(rng), u(rng)}};
    double d2 = 0.0;
    for (int a = 0; a < 2; ++a) {
      const double dx = q.pos[a] + (c.base.t - q.t) * q.vel[a] - c.base.pos[a];
      const double dv = q.vel[a] - c.base.vel[a];
      d2 += dx * dx + dv * dv;
    }
    const bool oracle = q.t > c.base.t - c.s && q.t <= c.base.t && d2 < c.r * c.r;
    CHECK(c.contains(q) == oracle);
  }
  // unit cylinder in n = 4: s * vol(B_1) = pi^2/2
  Cylinder unit;
  unit.dim = 2;
  CHECK(cylinder_measure(unit) == doctest::Approx(M_PI * M_PI / 2.0));
}

TEST_CASE("dim 2: smooth solver linearity and positivity") {
  const Grid g = grid2();
  SmoothProblem pb;
  pb.grid = g;
  pb.t_init = -1.0;
  pb.G = sample(g, [&](const PhasePoint& p) {
    double r2 = 0.0;
    for (int a = 0; a < 2; ++a) r2 += p.pos[a] * p.pos[a] + p.vel[a] * p.vel[a];
    const double ts = (p.t + 0.5) / 0.3;
    return ts * ts < 1.0 ? (1.0 - ts * ts) * std::exp(-2.0 * r2) : 0.0;
  });
  double res = 0.0;
  const GridField w = solve_smooth_ivp(pb, &res);
  CHECK(res <= 1e-9);
  double wmin = 0.0;
  for (double x : w.data) wmin = std::min(wmin, x);
  CHECK(wmin >= -1e-12);

  SmoothProblem pb2 = pb;
  for (auto& x : pb2.G.data) x *= 2.0;
  const GridField w2 = solve_smooth_ivp(pb2);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.data.size(); ++i)
    worst = std::max(worst, std::fabs(w2.data[i] - 2.0 * w.data[i]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("dim 2: evolve and composition certification on a diagonal checkerboard") {
  const Grid g = grid2();
  CoefficientRecipe r;
  r.kind = "checkerboard";
  r.lambda = 1.0;
  r.lambda_max = 3.0;
  r.blocks = 3;
  r.seed = 12;
  const RoughCoefficients coeffs = make_coefficients(g, r);
  CHECK(check_ellipticity(coeffs).ok);

  GridField u0(g);
  for (std::int64_t j = 0; j < g.slice_size(); ++j) {
    const PhasePoint p = g.point(0, g.spatial_unflat(j));
    double r2 = 0.0;
    for (int a = 0; a < 2; ++a) r2 += p.pos[a] * p.pos[a] + p.vel[a] * p.vel[a];
    u0.at(0, j) = 1.5 * std::exp(-r2);
  }
  const EvolveResult ev = evolve(coeffs, u0);
  CHECK(ev.residual_max <= 1e-8);

  const ComposeResult cr = compose_transform(coeffs, ev.u, Transform::truncation(0.15, 0.4));
  const ChainCertification cert = certify_compose(cr, 12, 1e-6);
  CHECK(cert.plain.worst_pos <= 1e-6);
  CHECK(cert.with_defect.worst_pos <= 1e-6);
}

TEST_CASE("dim 2: supremum bound certifies and stays sound") {
  const Grid g = grid2(12, 12, 8);
  CoefficientRecipe r;
  r.kind = "checkerboard";
  r.lambda = 1.0;
  r.lambda_max = 4.0;
  r.blocks = 3;
  r.seed = 4;
  const RoughCoefficients coeffs = make_coefficients(g, r);
  GridField u0(g);
  for (std::int64_t j = 0; j < g.slice_size(); ++j) {
    const PhasePoint p = g.point(0, g.spatial_unflat(j));
    double r2 = 0.0;
    for (int a = 0; a < 2; ++a) r2 += p.pos[a] * p.pos[a] + p.vel[a] * p.vel[a];
    u0.at(0, j) = 2.0 * std::exp(-r2);
  }
  const EvolveResult ev = evolve(coeffs, u0);
  const Cylinder inner{PhasePoint{}, 0.5, 1.0, DriftKind::Kinetic, 2};
  const Cylinder outer{PhasePoint{}, 1.0, 2.0, DriftKind::Kinetic, 2};
  SupOptions opts;
  opts.chain = ChainMode::None; // the coarse dim-2 grid cannot resolve the gain cutoffs
  const SupremumBound sb = supremum_bound(ev.u, coeffs, inner, outer, Exponents{}, opts);
  CHECK(sb.certified);
  CHECK(sb.invariants_ok);
  const double gmax = max_over(ev.u, cylinder_weights(g, inner));
  CHECK(sb.sup_estimate >= gmax - 1e-9);
}
