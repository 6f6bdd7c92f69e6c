#include "hypoharnack/kolmogorov.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "hypoharnack/norms.hpp"
#include "hypoharnack/parallel.hpp"

namespace hypoharnack {

int SmoothProblem::t_init_level() const {
  const int n = static_cast<int>(std::lround((t_init - grid.t_min) / grid.dt()));
  if (n < 0 || n > grid.nt) throw std::invalid_argument("SmoothProblem: t_init outside grid");
  return n;
}

namespace {

// rhs = G + sum_i Dminus_i F_i, masked to levels with t > t_init
GridField assemble_source(const SmoothProblem& pb) {
  const Grid& g = pb.grid;
  GridField rhs(g);
  const std::int64_t S = g.slice_size();
  const int n0 = pb.t_init_level();
  std::vector<double> tmp(static_cast<std::size_t>(S));
  for (int n = n0 + 1; n <= g.nt; ++n) {
    double* r = rhs.slice(n);
    const double* Gs = pb.G.data.empty() ? nullptr : pb.G.slice(n);
    if (Gs)
      for (std::int64_t j = 0; j < S; ++j) r[j] = Gs[j];
    for (std::size_t i = 0; i < pb.F.size(); ++i) {
      apply_xit(g, static_cast<int>(i), pb.F[i].slice(n), tmp.data());
      for (std::int64_t j = 0; j < S; ++j) r[j] += tmp[j];
    }
  }
  return rhs;
}

double max_step_residual(const Grid& g, const SchemeOptions& opt, const GridField& u,
                         const GridField& rhs, int n0) {
  ImplicitStepper stepper(g, opt);
  const std::int64_t S = g.slice_size();
  std::vector<double> res(static_cast<std::size_t>(S));
  double worst = 0.0;
  for (int n = n0 + 1; n <= g.nt; ++n) {
    stepper.apply(n, u.slice(n), u.slice(n - 1), res.data());
    for (std::int64_t j = 0; j < S; ++j)
      worst = std::max(worst, std::fabs(res[j] - rhs.at(n, j)));
  }
  return worst;
}

} // namespace

GridField solve_smooth_ivp(const SmoothProblem& pb, double* residual_out) {
  const Grid& g = pb.grid;
  SchemeOptions opt; // a = Id, kinetic drift, no lower order
  const GridField rhs = assemble_source(pb);
  GridField w = implicit_solve(g, opt, &rhs, pb.t_init_level());
  if (residual_out) *residual_out = max_step_residual(g, opt, w, rhs, pb.t_init_level());
  return w;
}

namespace {

struct BumpSpec {
  double t0, tw;
  Vec xc, vc;
  double xw, vw;
  double amp;
};

double bump1(double s) {
  const double a = 1.0 - s * s;
  return a > 0.0 ? a * a * a : 0.0;
}

double eval_bumps(const std::vector<BumpSpec>& bumps, const PhasePoint& p, int dim) {
  double acc = 0.0;
  for (const auto& b : bumps) {
    double v = b.amp * bump1((p.t - b.t0) / b.tw);
    for (int a = 0; a < dim && v != 0.0; ++a)
      v *= bump1((p.pos[a] - b.xc[a]) / b.xw) * bump1((p.vel[a] - b.vc[a]) / b.vw);
    acc += v;
  }
  return acc;
}

} // namespace

EstimateReport probe_hypothesis1(const Hypothesis1Probe& probe) {
  if (!(probe.p1 > 2.0 && probe.gamma0 <= probe.gamma1 && probe.gamma1 <= 2.0))
    throw std::invalid_argument("probe_hypothesis1: requires p1 > 2 and gamma0 <= gamma1 <= 2");
  EstimateReport rep;
  rep.name = "hypothesis1_gain";
  std::vector<double> max_ratio_per_level;

  for (int level = 0; level < probe.levels; ++level) {
    const Grid g = refined(probe.grid, std::pow(1.5, level));
    // norms over Omega cap {t > t_init}
    Cylinder region = probe.omega;
    region.s = region.base.t - probe.t_init;
    const RegionWeights wgt = cylinder_weights(g, region);

    std::mt19937_64 rng(probe.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double max_ratio = 0.0;
    std::vector<double> ratios;

    for (int trial = 0; trial < probe.trials; ++trial) {
      // random smooth data, identical across levels (continuum bumps)
      std::vector<BumpSpec> gb, fb;
      const int n_g = 1 + static_cast<int>(unif(rng) * 2.0);
      const int n_f = 1 + static_cast<int>(unif(rng) * 2.0);
      auto draw = [&](std::vector<BumpSpec>& out, int count) {
        for (int k = 0; k < count; ++k) {
          BumpSpec b;
          const double span = region.base.t - probe.t_init;
          b.t0 = probe.t_init + (0.3 + 0.6 * unif(rng)) * span;
          b.tw = (0.1 + 0.2 * unif(rng)) * span;
          for (int a = 0; a < g.dim; ++a) {
            b.xc[a] = probe.omega.base.pos[a] + (unif(rng) - 0.5) * probe.omega.r;
            b.vc[a] = probe.omega.base.vel[a] + (unif(rng) - 0.5) * probe.omega.r;
          }
          b.xw = (0.15 + 0.25 * unif(rng)) * probe.omega.r;
          b.vw = (0.15 + 0.25 * unif(rng)) * probe.omega.r;
          b.amp = (unif(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * unif(rng));
          out.push_back(b);
        }
      };
      draw(gb, n_g);
      draw(fb, n_f);

      SmoothProblem pb;
      pb.grid = g;
      pb.t_init = probe.t_init;
      pb.G = sample(g, [&](const PhasePoint& p) {
        return region.contains(p) ? eval_bumps(gb, p, g.dim) : 0.0;
      });
      pb.F.resize(g.dim);
      for (int a = 0; a < g.dim; ++a)
        pb.F[a] = sample(g, [&](const PhasePoint& p) {
          return region.contains(p) ? eval_bumps(fb, p, g.dim) : 0.0;
        });

      const GridField w = solve_smooth_ivp(pb);
      const double wn = lp_norm(w, wgt, probe.p1);
      const double gn = lp_norm(pb.G, wgt, probe.gamma0);
      GridField fabsf(g);
      for (std::size_t i = 0; i < fabsf.data.size(); ++i) {
        double s2 = 0.0;
        for (int a = 0; a < g.dim; ++a) s2 += pb.F[a].data[i] * pb.F[a].data[i];
        fabsf.data[i] = std::sqrt(s2);
      }
      const double fn = lp_norm(fabsf, wgt, probe.gamma1);
      const double denom = gn + fn;
      const double ratio = denom > 0.0 ? wn / denom : 0.0; // zero-data convention
      ratios.push_back(ratio);
      max_ratio = std::max(max_ratio, ratio);
    }

    max_ratio_per_level.push_back(max_ratio);
    if (level == 0) rep.trials = ratios;
    rep.extra("max_ratio_level_" + std::to_string(level), max_ratio);
  }

  rep.lhs = max_ratio_per_level.back();
  rep.rhs = max_ratio_per_level.front();
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 1.0;
  double worst_change = 0.0;
  for (std::size_t l = 1; l < max_ratio_per_level.size(); ++l) {
    const double prev = max_ratio_per_level[l - 1];
    if (prev > 0.0)
      worst_change = std::max(worst_change,
                              std::fabs(max_ratio_per_level[l] - prev) / prev);
  }
  rep.extra("max_rel_change", worst_change);
  rep.passed = worst_change <= 0.20;
  return rep;
}

DualProblem solve_dual(const Grid& g, const GridField& E_indicator, const PhasePoint& base) {
  if (std::fabs(g.t_min - (base.t - 1.0)) > 1e-9)
    throw std::invalid_argument("solve_dual: grid must start at t = base.t - 1");
  // admissibility: E subset C_{1,1}(base) cap {t <= base.t - 2/3}
  const Cylinder c11{base, 1.0, 1.0, DriftKind::Kinetic, g.dim};
  const RegionWeights region = cylinder_weights(g, c11, base.t - 2.0 / 3.0);
  const std::int64_t S = g.slice_size();
  for (int n = 0; n <= g.nt; ++n)
    for (std::int64_t j = 0; j < S; ++j)
      if (E_indicator.at(n, j) > 0.0 && region.at(n, j) <= 0.0)
        throw std::invalid_argument("solve_dual: E not contained in C_{1,1} cap {t <= -2/3}");

  // X0^t = X0 for the divergence-free kinetic drift; forward from t = -1
  SchemeOptions opt;
  DualProblem out;
  out.w = implicit_solve(g, opt, &E_indicator, 0);
  out.residual = max_step_residual(g, opt, out.w, E_indicator, 0);
  const RegionWeights box = box_weights(g);
  out.mass_l1 = lp_norm(out.w, box, 1.0);
  return out;
}

GridField random_admissible_set(const Grid& g, const PhasePoint& base, double eta,
                                std::uint64_t seed, double* measure_out,
                                double* region_measure_out) {
  const Cylinder c11{base, 1.0, 1.0, DriftKind::Kinetic, g.dim};
  const RegionWeights region = cylinder_weights(g, c11, base.t - 2.0 / 3.0);
  if (region_measure_out) *region_measure_out = region.measure;
  GridField E(g);
  const std::int64_t S = g.slice_size();
  const double target = eta * region.measure;
  const double cell = g.cell_volume() * g.dt();

  if (eta >= 1.0) {
    for (int n = 0; n <= g.nt; ++n)
      for (std::int64_t j = 0; j < S; ++j)
        if (region.at(n, j) > 0.0) E.at(n, j) = 1.0;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double measure = 0.0;
    int guard = 0;
    while (measure < target && ++guard < 4000) {
      PhasePoint ctr;
      ctr.t = base.t - 1.0 + (1.0 / 3.0) * unif(rng);
      for (int a = 0; a < g.dim; ++a) {
        ctr.pos[a] = base.pos[a] + 2.2 * (unif(rng) - 0.5);
        ctr.vel[a] = base.vel[a] + 2.2 * (unif(rng) - 0.5);
      }
      const double rad = 0.12 + 0.28 * unif(rng);
      const double tw = 0.05 + 0.12 * unif(rng);
      for (int n = 1; n <= g.nt; ++n) {
        if (std::fabs(g.t_level(n) - ctr.t) > tw) continue;
        for (std::int64_t j = 0; j < S; ++j) {
          if (region.at(n, j) <= 0.0 || E.at(n, j) != 0.0) continue;
          const PhasePoint p = g.point(n, g.spatial_unflat(j));
          if (phase_dist2(p, ctr, g.dim) < rad * rad) {
            E.at(n, j) = 1.0;
            measure += region.at(n, j) * cell;
          }
        }
      }
    }
  }
  if (measure_out) {
    double m = 0.0;
    for (int n = 0; n <= g.nt; ++n)
      for (std::int64_t j = 0; j < S; ++j)
        if (E.at(n, j) > 0.0) m += region.at(n, j) * cell;
    *measure_out = m;
  }
  return E;
}

EstimateReport probe_dual_spreading(const DualSpreadingProbe& probe) {
  if (!(probe.eta > 0.0 && probe.eta <= 1.0 && probe.p2 >= 2.0))
    throw std::invalid_argument("probe_dual_spreading: requires eta in (0,1] and p2 >= 2");
  EstimateReport rep;
  rep.name = "dual_spreading";
  std::vector<double> mu0_per_level;

  for (int level = 0; level < probe.levels; ++level) {
    const Grid g = refined(probe.grid, std::pow(1.5, level));
    const Cylinder c_half{probe.base, 0.5, 2.0, DriftKind::Kinetic, g.dim};
    const RegionWeights w_half = cylinder_weights(g, c_half);
    const SigmaDomains sig = sigma_domains(probe.R, probe.base, g.dim);
    const RegionWeights w_sigma = cylinder_weights(g, sig.sigma);

    double mu0_min = std::numeric_limits<double>::infinity();
    double l1_max = 0.0, wp2_max = 0.0, xwp2_max = 0.0;
    std::vector<double> mu0s;
    for (int trial = 0; trial < probe.trials; ++trial) {
      double e_measure = 0.0, region_measure = 0.0;
      const GridField E = random_admissible_set(g, probe.base, probe.eta,
                                                probe.seed + 977 * trial, &e_measure,
                                                &region_measure);
      const DualProblem dual = solve_dual(g, E, probe.base);
      const double mu0 = min_over(dual.w, w_half);
      mu0s.push_back(mu0);
      mu0_min = std::min(mu0_min, mu0);
      l1_max = std::max(l1_max, dual.mass_l1);
      wp2_max = std::max(wp2_max, lp_norm(dual.w, w_sigma, probe.p2));
      GridField xw(g);
      const std::int64_t S = g.slice_size();
      std::vector<double> tmp(static_cast<std::size_t>(S));
      for (int n = 0; n <= g.nt; ++n) {
        for (int a = 0; a < g.dim; ++a) {
          apply_xi(g, a, dual.w.slice(n), tmp.data());
          for (std::int64_t j = 0; j < S; ++j) xw.at(n, j) += tmp[j] * tmp[j];
        }
        for (std::int64_t j = 0; j < S; ++j) xw.at(n, j) = std::sqrt(xw.at(n, j));
      }
      xwp2_max = std::max(xwp2_max, lp_norm(xw, w_sigma, probe.p2));
    }
    mu0_per_level.push_back(mu0_min);
    if (level == 0) rep.trials = mu0s;
    rep.extra("mu0_level_" + std::to_string(level), mu0_min);
    rep.extra("w_l1_max_level_" + std::to_string(level), l1_max);
    rep.extra("w_p2_max_level_" + std::to_string(level), wp2_max);
    rep.extra("xw_p2_max_level_" + std::to_string(level), xwp2_max);
  }

  rep.lhs = mu0_per_level.back();
  rep.rhs = mu0_per_level.front();
  rep.ratio = rep.rhs != 0.0 ? rep.lhs / rep.rhs : 0.0;
  // acceptance: min positive at every level and the Sigma_R norms bounded
  // across refinement (the corner minimum itself is Gaussian-tail small and
  // not refinement-stable in value)
  bool ok = true;
  for (double m : mu0_per_level)
    if (!(m > 0.0)) ok = false;
  auto bounded = [&](const std::string& key) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int l = 0; l < probe.levels; ++l) {
      const double v = rep.get_extra(key + std::to_string(l));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi <= 2.0 * std::max(lo, 1e-300);
  };
  if (!bounded("w_l1_max_level_") || !bounded("w_p2_max_level_") ||
      !bounded("xw_p2_max_level_"))
    ok = false;
  rep.passed = ok;
  return rep;
}

MaxPrincipleReport weak_max_principle_check(const GridField& w0, double tol) {
  MaxPrincipleReport rep;
  rep.tol = tol;
  const Grid& g = w0.grid;
  const std::int64_t S = g.slice_size();
  SchemeOptions opt;
  ImplicitStepper stepper(g, opt);
  std::vector<double> res(static_cast<std::size_t>(S));

  rep.is_subsolution = true;
  for (std::int64_t j = 0; j < S; ++j)
    if (w0.at(0, j) > tol) rep.is_subsolution = false; // zero initial data required
  for (int n = 1; n <= g.nt && rep.is_subsolution; ++n) {
    stepper.apply(n, w0.slice(n), w0.slice(n - 1), res.data());
    for (std::int64_t j = 0; j < S; ++j) {
      if (res[j] > rep.max_residual) {
        rep.max_residual = res[j];
        if (res[j] > tol) {
          rep.is_subsolution = false;
          rep.worst_level = n;
          rep.worst_cell = j;
        }
      }
    }
  }

  rep.max_value = w0.max_value();
  if (rep.max_value > tol && rep.worst_level < 0) {
    for (int n = 0; n <= g.nt; ++n)
      for (std::int64_t j = 0; j < S; ++j)
        if (w0.at(n, j) == rep.max_value) {
          rep.worst_level = n;
          rep.worst_cell = j;
        }
  }
  rep.passed = rep.is_subsolution && rep.max_value <= tol;
  return rep;
}

ViscousSolution viscous_comparison(double eps_visc, const SmoothProblem& pb,
                                   const CutoffField& chi) {
  if (!(eps_visc > 0.0)) throw std::invalid_argument("viscous_comparison: eps_visc must be > 0");
  const Grid& g = pb.grid;
  const std::int64_t S = g.slice_size();

  GridField ext_w(g);
  GridField one_minus_chi(g);
  for (int n = 0; n <= g.nt; ++n)
    for (std::int64_t j = 0; j < S; ++j) {
      const double c = chi.eval(g.point(n, g.spatial_unflat(j)));
      const double omc = 1.0 - c;
      one_minus_chi.at(n, j) = omc;
      ext_w.at(n, j) = omc * omc;
    }

  SchemeOptions opt;
  opt.extra_viscosity = eps_visc;
  opt.ext_weight = &ext_w;
  const GridField rhs = assemble_source(pb);
  ViscousSolution out;
  out.w = implicit_solve(g, opt, &rhs, pb.t_init_level());

  // energy norms over {t > t_init}
  const int n0 = pb.t_init_level();
  const double cell = g.cell_volume() * g.dt();
  double s_l2 = 0.0, s_xg = 0.0, s_eg = 0.0;
  std::vector<double> tmp(static_cast<std::size_t>(S));
  for (int n = n0 + 1; n <= g.nt; ++n) {
    const double* wn = out.w.slice(n);
    for (std::int64_t j = 0; j < S; ++j) s_l2 += wn[j] * wn[j];
    for (int a = 0; a < g.dim; ++a) {
      apply_xi(g, a, wn, tmp.data());
      for (std::int64_t j = 0; j < S; ++j) s_xg += tmp[j] * tmp[j];
    }
    // (1-chi) grad over all 2*dim directions (forward differences)
    for (int a = 0; a < 2 * g.dim; ++a) {
      const bool isx = a < g.dim;
      const int ax = isx ? a : a - g.dim;
      const double h = isx ? g.hx(ax) : g.hv(ax);
      const std::int64_t st = isx ? g.x_stride(ax) : g.v_stride(ax);
      for (std::int64_t j = 0; j < S; ++j) {
        const SpatialIdx idx = g.spatial_unflat(j);
        const int coord = isx ? idx.ix[ax] : idx.iv[ax];
        const int ncells = isx ? g.nx[ax] : g.nv[ax];
        const double hi = coord + 1 < ncells ? wn[j + st] : 0.0;
        const double d = (hi - wn[j]) / h;
        const double w1 = one_minus_chi.at(n, j);
        s_eg += w1 * w1 * d * d;
      }
    }
  }
  out.norm_l2 = std::sqrt(s_l2 * cell);
  out.norm_xgrad = std::sqrt(s_xg * cell);
  out.norm_extgrad = std::sqrt(s_eg * cell);
  return out;
}

} // namespace hypoharnack
