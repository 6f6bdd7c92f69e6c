#include "hypoharnack/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "hypoharnack/parallel.hpp"

namespace hypoharnack {

PhasePoint flow(DriftKind drift, double t_from, double t_to, const PhasePoint& p) {
  PhasePoint q = p;
  q.t = t_to;
  if (drift == DriftKind::Kinetic) {
    const double tau = t_to - t_from;
    for (int a = 0; a < kMaxDim; ++a) q.pos[a] = p.pos[a] + tau * p.vel[a];
  }
  return q;
}

bool Cylinder::contains(const PhasePoint& q) const {
  if (!(q.t > base.t - s && q.t <= base.t)) return false;
  const PhasePoint top = flow(drift, q.t, base.t, q);
  return phase_dist2(top, base, dim) < r * r;
}

double unit_ball_volume(int n) {
  // vol(B_1) in R^n = pi^{n/2} / Gamma(n/2 + 1)
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace {

// Jacobian determinant of z -> flow(t -> t0, z), via forward differences.
double flow_jacobian_det(DriftKind drift, double t, double t0, const PhasePoint& at, int dim) {
  const int n = 2 * dim;
  const double h = 1e-5;
  double J[2 * kMaxDim][2 * kMaxDim];
  auto coord = [dim](const PhasePoint& p, int k) {
    return k < dim ? p.pos[k] : p.vel[k - dim];
  };
  const PhasePoint f0 = flow(drift, t, t0, at);
  for (int c = 0; c < n; ++c) {
    PhasePoint pert = at;
    if (c < dim)
      pert.pos[c] += h;
    else
      pert.vel[c - dim] += h;
    const PhasePoint fc = flow(drift, t, t0, pert);
    for (int rix = 0; rix < n; ++rix) J[rix][c] = (coord(fc, rix) - coord(f0, rix)) / h;
  }
  if (n == 2) return J[0][0] * J[1][1] - J[0][1] * J[1][0];
  // n == 4: cofactor expansion
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return J[r0][c0] * (J[r1][c1] * J[r2][c2] - J[r1][c2] * J[r2][c1]) -
           J[r0][c1] * (J[r1][c0] * J[r2][c2] - J[r1][c2] * J[r2][c0]) +
           J[r0][c2] * (J[r1][c0] * J[r2][c1] - J[r1][c1] * J[r2][c0]);
  };
  double d = 0.0;
  d += J[0][0] * det3(1, 2, 3, 1, 2, 3);
  d -= J[0][1] * det3(1, 2, 3, 0, 2, 3);
  d += J[0][2] * det3(1, 2, 3, 0, 1, 3);
  d -= J[0][3] * det3(1, 2, 3, 0, 1, 2);
  return d;
}

} // namespace

double cylinder_measure(const Cylinder& c) {
  if (c.s <= 0.0 || c.r <= 0.0) return 0.0;
  const int n = 2 * c.dim;
  const double ball = unit_ball_volume(n) * std::pow(c.r, n);
  if (c.drift == DriftKind::Kinetic || c.drift == DriftKind::Zero) {
    // divergence-free transport preserves volume slice by slice
    return c.s * ball;
  }
  // generic path: integrate |det D flow| over the window (midpoint rule)
  const int nq = 64;
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    const double t = c.base.t - c.s + (i + 0.5) * c.s / nq;
    acc += std::fabs(flow_jacobian_det(c.drift, c.base.t, t, c.base, c.dim));
  }
  return ball * acc * (c.s / nq);
}

// ---------------------------------------------------------------------------
// profiles

namespace {

// quintic smoothstep: q(0)=0, q(1)=1, q'(0)=q'(1)=q''(0)=q''(1)=0
inline double qstep(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
inline double qstep_d(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
inline double qstep_dd(double x) { return 60.0 * x * (1.0 - 3.0 * x + 2.0 * x * x); }

struct ProfileVal {
  double p, dp, ddp;
};

ProfileVal radial_profile(RadialProfile profile, double rho, double inner, double outer) {
  ProfileVal out{0.0, 0.0, 0.0};
  if (rho <= inner) {
    out.p = 1.0;
    return out;
  }
  if (rho >= outer) return out;
  if (profile == RadialProfile::Shell) {
    const double g = outer - inner;
    const double xi = (rho - inner) / g;
    out.p = 1.0 - qstep(xi);
    out.dp = -qstep_d(xi) / g;
    out.ddp = -qstep_dd(xi) / (g * g);
  } else {
    // FlatHess: p' ramps linearly down and back up (triangle), so
    // |p''| = s a.e. with s = 4/gap^2 and max |p'| = 2/gap at the midpoint.
    const double g = outer - inner;
    const double s = 4.0 / (g * g);
    const double mid = 0.5 * (inner + outer);
    if (rho <= mid) {
      const double d = rho - inner;
      out.p = 1.0 - 0.5 * s * d * d;
      out.dp = -s * d;
      out.ddp = -s;
    } else {
      const double d = outer - rho;
      out.p = 0.5 * s * d * d;
      out.dp = -s * d;
      out.ddp = s;
    }
  }
  return out;
}

} // namespace

double CutoffField::eval_time(double t) const {
  if (t <= inner) return 0.0;
  if (t >= outer) return 1.0;
  return qstep((t - inner) / (outer - inner));
}

double CutoffField::ddt_time(double t) const {
  if (t <= inner || t >= outer) return 0.0;
  const double g = outer - inner;
  return qstep_d((t - inner) / g) / g;
}

double CutoffField::eval(const PhasePoint& p) const {
  if (kind == CutoffKind::Temporal) return eval_time(p.t);
  const PhasePoint top = flow(drift, p.t, base.t, p);
  const double rho = std::sqrt(phase_dist2(top, base, dim));
  return radial_profile(profile, rho, inner, outer).p;
}

void CutoffField::grad_v(const PhasePoint& p, double* out) const {
  for (int i = 0; i < dim; ++i) out[i] = 0.0;
  if (kind == CutoffKind::Temporal) return;
  const PhasePoint top = flow(drift, p.t, base.t, p);
  const double rho2 = phase_dist2(top, base, dim);
  const double rho = std::sqrt(rho2);
  const ProfileVal pv = radial_profile(profile, rho, inner, outer);
  if (pv.dp == 0.0 || rho < 1e-14) return;
  const double tau = (drift == DriftKind::Kinetic) ? base.t - p.t : 0.0;
  for (int i = 0; i < dim; ++i) {
    // d/dv_i of |Phi(z) - z0| with Phi = (x + tau v, v)
    const double y_dot_wi = (top.pos[i] - base.pos[i]) * tau + (top.vel[i] - base.vel[i]);
    out[i] = pv.dp * y_dot_wi / rho;
  }
}

void CutoffField::hess_v(const PhasePoint& p, double* out) const {
  for (int i = 0; i < dim * dim; ++i) out[i] = 0.0;
  if (kind == CutoffKind::Temporal) return;
  const PhasePoint top = flow(drift, p.t, base.t, p);
  const double rho2 = phase_dist2(top, base, dim);
  const double rho = std::sqrt(rho2);
  const ProfileVal pv = radial_profile(profile, rho, inner, outer);
  if ((pv.dp == 0.0 && pv.ddp == 0.0) || rho < 1e-14) return;
  const double tau = (drift == DriftKind::Kinetic) ? base.t - p.t : 0.0;
  const double wdot = 1.0 + tau * tau; // w_i . w_j = (1 + tau^2) delta_ij
  for (int i = 0; i < dim; ++i) {
    const double yi = ((top.pos[i] - base.pos[i]) * tau + (top.vel[i] - base.vel[i])) / rho;
    for (int j = 0; j < dim; ++j) {
      const double yj = ((top.pos[j] - base.pos[j]) * tau + (top.vel[j] - base.vel[j])) / rho;
      double h = pv.ddp * yi * yj;
      h += (pv.dp / rho) * ((i == j ? wdot : 0.0) - yi * yj);
      out[i * dim + j] = h;
    }
  }
}

GridField CutoffField::sample_on(const Grid& g) const {
  return sample(g, [this](const PhasePoint& p) { return eval(p); });
}

CutoffField make_spatial_cutoff(double r1, double r2, std::pair<double, double> window,
                                const PhasePoint& base, int dim, DriftKind drift) {
  if (!(r1 < r2)) throw std::invalid_argument("make_spatial_cutoff: requires r1 < r2");
  CutoffField c;
  c.kind = CutoffKind::Spatial;
  c.profile = RadialProfile::Shell;
  c.drift = drift;
  c.base = base;
  c.dim = dim;
  c.inner = r1;
  c.outer = r2;
  c.window = window;
  return c;
}

CutoffField make_temporal_cutoff(double s1, double s2) {
  if (!(s1 < s2)) throw std::invalid_argument("make_temporal_cutoff: requires s1 < s2");
  CutoffField c;
  c.kind = CutoffKind::Temporal;
  c.inner = s1;
  c.outer = s2;
  c.window = {s1, s2};
  return c;
}

// ---------------------------------------------------------------------------
// sigma domains

namespace {
// eta~ uses the FlatHess profile across [a0, a0 + g(R)]:
// |X X eta~| <= (1 + tau^2) * 4/g^2 <= 8/g^2 over |tau| <= 1, so g^2 = 8.4 R
// delivers the 1/R Hessian bound with margin; the slope bound
// |X eta~| <= sqrt(2) * 2/g <= 1 holds once g >= 2.83.
constexpr double kSigmaPlateau = 2.0;    // eta~ == 1 on C_{1,2}
constexpr double kSigmaHessRate = 8.4;   // g^2 >= kSigmaHessRate * R
constexpr double kSigmaMinGap = 2.9;     // slope constraint of eta~
constexpr double kSigmaEtaGap = 2.75;    // shell gap of eta: 1.875*sqrt(2)/gap <= 1
} // namespace

double sigma_tilde_radius(double R) {
  const double g = std::max(std::sqrt(kSigmaHessRate * R), kSigmaMinGap);
  return kSigmaPlateau + g;
}

double sigma_radius(double R) { return sigma_tilde_radius(R) + kSigmaEtaGap; }

SigmaDomains sigma_domains(double R, const PhasePoint& base, int dim) {
  if (!(R > 1.0)) throw std::invalid_argument("sigma_domains: requires R > 1");
  SigmaDomains out;
  out.R = R;
  const double rho_t = sigma_tilde_radius(R);
  const double rho = sigma_radius(R);

  out.sigma_tilde = Cylinder{base, 1.0, rho_t, DriftKind::Kinetic, dim};
  out.sigma = Cylinder{base, 1.0, rho, DriftKind::Kinetic, dim};

  out.eta_tilde.kind = CutoffKind::Spatial;
  out.eta_tilde.profile = RadialProfile::FlatHess;
  out.eta_tilde.drift = DriftKind::Kinetic;
  out.eta_tilde.base = base;
  out.eta_tilde.dim = dim;
  out.eta_tilde.inner = kSigmaPlateau;
  out.eta_tilde.outer = rho_t;
  out.eta_tilde.window = {base.t - 1.0, base.t};

  out.eta = make_spatial_cutoff(rho_t, rho, {base.t - 1.0, base.t}, base, dim);
  return out;
}

// ---------------------------------------------------------------------------
// JSON descriptors

namespace {
using nlohmann::ordered_json;

ordered_json point_to_json(const PhasePoint& p, int dim) {
  ordered_json j;
  j["t"] = p.t;
  for (int a = 0; a < dim; ++a) {
    j["pos"].push_back(p.pos[a]);
    j["vel"].push_back(p.vel[a]);
  }
  return j;
}

PhasePoint point_from_json(const ordered_json& j) {
  PhasePoint p;
  p.t = j.at("t").get<double>();
  const auto& pos = j.at("pos");
  const auto& vel = j.at("vel");
  for (std::size_t a = 0; a < pos.size() && a < kMaxDim; ++a) {
    p.pos[a] = pos[a].get<double>();
    p.vel[a] = vel[a].get<double>();
  }
  return p;
}

const char* drift_name(DriftKind d) { return d == DriftKind::Kinetic ? "kinetic" : "zero"; }
DriftKind drift_from_name(const std::string& s) {
  if (s == "kinetic") return DriftKind::Kinetic;
  if (s == "zero") return DriftKind::Zero;
  throw std::invalid_argument("unknown drift kind: " + s);
}
} // namespace

std::string cylinder_to_json(const Cylinder& c) {
  ordered_json j;
  j["base"] = point_to_json(c.base, c.dim);
  j["s"] = c.s;
  j["r"] = c.r;
  j["drift"] = drift_name(c.drift);
  j["dim"] = c.dim;
  return j.dump();
}

Cylinder cylinder_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Cylinder c;
  c.base = point_from_json(j.at("base"));
  c.s = j.at("s").get<double>();
  c.r = j.at("r").get<double>();
  c.drift = drift_from_name(j.at("drift").get<std::string>());
  c.dim = j.at("dim").get<int>();
  return c;
}

std::string cutoff_to_json(const CutoffField& c) {
  ordered_json j;
  j["kind"] = c.kind == CutoffKind::Spatial ? "spatial" : "temporal";
  j["base"] = point_to_json(c.base, c.dim > 0 ? c.dim : 1);
  j["drift"] = drift_name(c.drift);
  j["dim"] = c.dim;
  j["scales"]["inner"] = c.inner;
  j["scales"]["outer"] = c.outer;
  j["scales"]["profile"] = c.profile == RadialProfile::Shell ? "shell" : "flat-hess";
  j["scales"]["window"] = {c.window.first, c.window.second};
  return j.dump();
}

CutoffField cutoff_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  CutoffField c;
  c.kind = j.at("kind").get<std::string>() == "spatial" ? CutoffKind::Spatial : CutoffKind::Temporal;
  c.base = point_from_json(j.at("base"));
  c.drift = drift_from_name(j.at("drift").get<std::string>());
  c.dim = j.at("dim").get<int>();
  const auto& s = j.at("scales");
  c.inner = s.at("inner").get<double>();
  c.outer = s.at("outer").get<double>();
  c.profile = s.at("profile").get<std::string>() == "shell" ? RadialProfile::Shell
                                                            : RadialProfile::FlatHess;
  c.window = {s.at("window")[0].get<double>(), s.at("window")[1].get<double>()};
  return c;
}

} // namespace hypoharnack
