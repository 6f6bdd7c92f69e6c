#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hypoharnack/harnack.hpp"

using namespace hypoharnack;

namespace {

// box sized to cover Sigma_R at the default weak-Harnack scale
Grid harnack_grid(int nt, int nx, int nv, double R) {
  Grid g;
  g.dim = 1;
  g.nt = nt;
  g.t_min = -1.0;
  g.t_max = 0.0;
  const double rho = sigma_radius(R);
  g.nx[0] = nx;
  g.nv[0] = nv;
  g.x_min[0] = -(2.0 * rho + 0.5);
  g.x_max[0] = 2.0 * rho + 0.5;
  g.v_min[0] = -(rho + 0.5);
  g.v_max[0] = rho + 0.5;
  return g;
}

GridField gaussian_u0(const Grid& g, double amp, double width = 0.7) {
  GridField u0(g);
  for (std::int64_t j = 0; j < g.slice_size(); ++j) {
    const PhasePoint p = g.point(0, g.spatial_unflat(j));
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += p.pos[a] * p.pos[a] + p.vel[a] * p.vel[a];
    u0.at(0, j) = amp * std::exp(-r2 / (2.0 * width * width));
  }
  return u0;
}

double default_R(const HarnackOptions& o, double delta_s) {
  return std::max(o.c_r * std::pow(1.0 + delta_s, o.beta_sup), 1.05);
}

} // namespace

TEST_CASE("l1_gain: constant-one supersolution gives a vanishing left side") {
  HarnackOptions opts;
  const double R = default_R(opts, 2.5);
  const Grid g = harnack_grid(24, 48, 36, R);
  CoefficientRecipe id;
  const RoughCoefficients coeffs = make_coefficients(g, id);
  const GridField u(g, 1.0);
  const ComposeResult cr = compose_transform(coeffs, u, Transform::log_reg(0.1), true);
  CHECK(cr.v.max_abs() == 0.0);
  const SigmaDomains sig = sigma_domains(R, PhasePoint{0.0, {0, 0}, {0, 0}}, 1);
  const EstimateReport rep = l1_gain(cr, sig, log_transform_at_zero({0.1}));
  CHECK(rep.lhs == 0.0);
  CHECK(rep.ratio == 0.0);
  CHECK(rep.passed); // the slice-wise differential inequality holds trivially
}

TEST_CASE("l1_gain: kernel-type supersolution, stability and delta sweep") {
  HarnackOptions opts;
  const double R = default_R(opts, 2.5);
  const SigmaDomains sig = sigma_domains(R, PhasePoint{0.0, {0, 0}, {0, 0}}, 1);

  auto lhs_at = [&](int nx, double delta) {
    const Grid g = harnack_grid(28, nx, (2 * nx) / 3, R);
    CoefficientRecipe id;
    const RoughCoefficients coeffs = make_coefficients(g, id);
    const EvolveResult ev = evolve(coeffs, gaussian_u0(g, 40.0));
    GridField u = ev.u;
    for (auto& x : u.data) x = std::max(x, 0.0);
    const ComposeResult cr = compose_transform(coeffs, u, Transform::log_reg(delta), true);
    return l1_gain(cr, sig, log_transform_at_zero({delta}), 0.15);
  };

  const EstimateReport a = lhs_at(48, 0.1);
  const EstimateReport b = lhs_at(64, 0.1);
  CHECK(a.lhs > 0.0);
  CHECK(a.passed);
  CHECK(b.passed);
  CHECK(std::fabs(b.ratio - a.ratio) <= 0.5 * std::max(a.ratio, 1e-12));

  // delta sweep: the gradient gain grows at most linearly in G_delta(0)
  std::vector<double> g0s, lhss;
  for (double delta : {0.2, 0.1, 0.05}) {
    const EstimateReport r = lhs_at(48, delta);
    g0s.push_back(log_transform_at_zero({delta}));
    lhss.push_back(r.lhs);
  }
  for (std::size_t i = 1; i < g0s.size(); ++i) {
    const double growth = (lhss[i] - lhss[i - 1]) / (g0s[i] - g0s[i - 1]);
    CHECK(growth <= lhss[0] / g0s[0] * 10.0 + 10.0); // no super-linear blowup
  }
}

TEST_CASE("dual_gain: degenerate and trivial cases") {
  HarnackOptions opts;
  const double R = default_R(opts, 2.5);
  const Grid g = harnack_grid(24, 48, 36, R);
  const PhasePoint base{0.0, {0, 0}, {0, 0}};
  const SigmaDomains sig = sigma_domains(R, base, 1);
  CoefficientRecipe id;
  const RoughCoefficients coeffs = make_coefficients(g, id);

  // u >= 1 everywhere: v == 0 and E is the whole admissible region
  const GridField u(g, 1.5);
  const ComposeResult cr = compose_transform(coeffs, u, Transform::log_reg(0.1), true);
  const Cylinder c11{base, 1.0, 1.0, DriftKind::Kinetic, 1};
  const RegionWeights reg = cylinder_weights(g, c11, -2.0 / 3.0);
  GridField E(g);
  for (std::size_t i = 0; i < E.data.size(); ++i) E.data[i] = reg.w[i] > 0.0 ? 1.0 : 0.0;
  const DualProblem dual = solve_dual(g, E, base);
  const Cylinder c_half{base, 0.5, 2.0, DriftKind::Kinetic, 1};
  const double mu0 = min_over(dual.w, cylinder_weights(g, c_half));
  const double g0 = log_transform_at_zero({0.1});

  const EstimateReport rep = dual_gain(cr, dual, sig, Exponents{}, mu0, g0, E);
  CHECK(rep.lhs == 0.0); // v vanishes everywhere
  CHECK(rep.passed);

  // E = empty forced: w == 0, K == 0, bound degenerates to the (G/R)^2 term
  const GridField none(g);
  const DualProblem d0 = solve_dual(g, none, base);
  const EstimateReport rep0 = dual_gain(cr, d0, sig, Exponents{}, 0.0, g0, none);
  CHECK(rep0.get_extra("sup_K") == 0.0);
  CHECK(rep0.rhs >= std::pow(g0 / R, 2.0));
}

TEST_CASE("dual_gain rejects v that does not vanish on E") {
  HarnackOptions opts;
  const double R = default_R(opts, 2.5);
  const Grid g = harnack_grid(20, 40, 30, R);
  const PhasePoint base{0.0, {0, 0}, {0, 0}};
  const SigmaDomains sig = sigma_domains(R, base, 1);
  CoefficientRecipe id;
  const RoughCoefficients coeffs = make_coefficients(g, id);
  const GridField u(g, 0.5); // u < 1, so G_delta(u) > 0
  const ComposeResult cr = compose_transform(coeffs, u, Transform::log_reg(0.1), true);
  const Cylinder c11{base, 1.0, 1.0, DriftKind::Kinetic, 1};
  const RegionWeights reg = cylinder_weights(g, c11, -2.0 / 3.0);
  GridField E(g);
  for (std::size_t i = 0; i < E.data.size(); ++i) E.data[i] = reg.w[i] > 0.0 ? 1.0 : 0.0;
  const DualProblem dual = solve_dual(g, E, base);
  const EstimateReport rep =
      dual_gain(cr, dual, sig, Exponents{}, 1.0, log_transform_at_zero({0.1}), E);
  CHECK_FALSE(rep.passed); // E was not built from {u >= 1}
}

TEST_CASE("weak_harnack: trivial u == 1 certificate with mu = 1") {
  HarnackOptions opts;
  opts.sup.chain = ChainMode::None;
  const double R = default_R(opts, 2.5);
  const Grid g = harnack_grid(24, 56, 40, R);
  CoefficientRecipe id;
  const RoughCoefficients coeffs = make_coefficients(g, id);
  const GridField u(g, 1.0);
  const HarnackCertificate cert =
      weak_harnack(u, coeffs, 0.25, 2.5, 8.0, Exponents{}, opts);
  REQUIRE(cert.passed);
  CHECK(cert.mu == doctest::Approx(1.0));
  CHECK(cert.eta == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cert.sound);
  CHECK(cert.mu0 > 0.0);
}

TEST_CASE("weak_harnack: smooth positive supersolution yields a sound mu > 0") {
  HarnackOptions opts;
  opts.sup.chain = ChainMode::Final;
  const double R = default_R(opts, 2.5);
  const Grid g = harnack_grid(32, 72, 48, R);
  CoefficientRecipe id;
  const RoughCoefficients coeffs = make_coefficients(g, id);
  const EvolveResult ev = evolve(coeffs, gaussian_u0(g, 60.0));
  GridField u = ev.u;
  for (auto& x : u.data) x = std::max(x, 0.0);

  const HarnackCertificate cert =
      weak_harnack(u, coeffs, 0.1, 2.5, 8.0, Exponents{}, opts);
  INFO("failure: " << cert.failure);
  REQUIRE(cert.passed);
  CHECK(cert.mu > 0.0);
  CHECK(cert.sound);
  CHECK(cert.mu <= cert.u_min_inner + 1e-8);
  CHECK(cert.mu0 > 0.0);
  CHECK(cert.certified_sup_v <= 0.75 * cert.g_delta_zero);
  CHECK_FALSE(cert.chain.empty());

  // certificate JSON carries the contract fields
  const std::string js = certificate_to_json(cert);
  for (const char* key : {"\"mu\"", "\"delta\"", "\"R\"", "\"eta\"", "\"passed\"", "\"chain\""})
    CHECK(js.find(key) != std::string::npos);
}

TEST_CASE("weak_harnack: failure paths are reported, not thrown") {
  HarnackOptions opts;
  opts.sup.chain = ChainMode::None;
  const double R = default_R(opts, 2.5);
  const Grid g = harnack_grid(20, 40, 30, R);
  CoefficientRecipe id;
  const RoughCoefficients coeffs = make_coefficients(g, id);

  // measure condition fails: u far below 1
  const HarnackCertificate c1 =
      weak_harnack(GridField(g, 0.01), coeffs, 0.25, 2.5, 8.0, Exponents{}, opts);
  CHECK_FALSE(c1.passed);
  CHECK(c1.failure.find("measure condition") != std::string::npos);

  // coefficient smallness fails: delta_S budget below the measured value
  const HarnackCertificate c2 =
      weak_harnack(GridField(g, 1.0), coeffs, 0.25, 0.5, 8.0, Exponents{}, opts);
  CHECK_FALSE(c2.passed);
  CHECK(c2.failure.find("delta_S") != std::string::npos);
}
