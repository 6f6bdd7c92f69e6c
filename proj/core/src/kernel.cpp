#include "hypoharnack/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "hypoharnack/geometry.hpp"
#include "hypoharnack/parallel.hpp"

namespace hypoharnack {

namespace {
inline double pair_log_density(double tau, double xi, double zeta) {
  return -3.0 * xi * xi / (tau * tau * tau) + 3.0 * xi * zeta / (tau * tau) - zeta * zeta / tau;
}
inline double pair_prefactor(double tau) {
  return std::sqrt(3.0) / (2.0 * M_PI * tau * tau);
}
} // namespace

double fundamental_solution(const KernelSpec& spec, double t, const PhasePoint& p, double s,
                            const PhasePoint& q) {
  if (!(t > s)) throw std::invalid_argument("fundamental_solution: requires t > s");
  const double tau = t - s;
  double logg = 0.0;
  for (int a = 0; a < spec.dim; ++a) {
    const double xi = p.pos[a] - q.pos[a] - tau * q.vel[a];
    const double zeta = p.vel[a] - q.vel[a];
    logg += pair_log_density(tau, xi, zeta);
  }
  return std::pow(pair_prefactor(tau), spec.dim) * std::exp(logg);
}

void fundamental_solution_grad_source_vel(const KernelSpec& spec, double t, const PhasePoint& p,
                                          double s, const PhasePoint& q, double* out) {
  const double g = fundamental_solution(spec, t, p, s, q);
  const double tau = t - s;
  for (int a = 0; a < spec.dim; ++a) {
    const double xi = p.pos[a] - q.pos[a] - tau * q.vel[a];
    const double zeta = p.vel[a] - q.vel[a];
    out[a] = (3.0 * xi / (tau * tau) - zeta / tau) * g;
  }
}

namespace {
// Quadrature box scales: per pair, Var(x) = 2 tau^3 / 3, Var(v) = 2 tau.
struct QuadBox {
  double x_lo, x_hi, v_lo, v_hi;
};
QuadBox kernel_box(double tau, const PhasePoint& q, int a) {
  const double sx = std::sqrt(2.0 * tau * tau * tau / 3.0);
  const double sv = std::sqrt(2.0 * tau);
  const double cx = q.pos[a] + tau * q.vel[a];
  const double cv = q.vel[a];
  const double k = 10.0;
  return {cx - k * sx, cx + k * sx, cv - k * sv, cv + k * sv};
}
} // namespace

double kernel_mass(const KernelSpec& spec, double tau, int n_per_axis) {
  // product structure: mass = (per-pair mass)^dim; integrate one pair
  PhasePoint q; // origin source
  const QuadBox b = kernel_box(tau, q, 0);
  const double hx = (b.x_hi - b.x_lo) / n_per_axis;
  const double hv = (b.v_hi - b.v_lo) / n_per_axis;
  const double pre = pair_prefactor(tau);
  const double mass1 = parallel_sum(static_cast<std::size_t>(n_per_axis), [&](std::size_t i) {
    const double x = b.x_lo + (i + 0.5) * hx;
    double row = 0.0;
    for (int j = 0; j < n_per_axis; ++j) {
      const double v = b.v_lo + (j + 0.5) * hv;
      row += std::exp(pair_log_density(tau, x, v));
    }
    return row;
  }) * pre * hx * hv;
  return std::pow(mass1, spec.dim);
}

void kernel_mean(const KernelSpec& spec, double tau, const PhasePoint& q, int n_per_axis,
                 double* out) {
  for (int a = 0; a < spec.dim; ++a) {
    const QuadBox b = kernel_box(tau, q, a);
    const double hx = (b.x_hi - b.x_lo) / n_per_axis;
    const double hv = (b.v_hi - b.v_lo) / n_per_axis;
    double m0 = 0.0, mx = 0.0, mv = 0.0;
    for (int i = 0; i < n_per_axis; ++i) {
      const double x = b.x_lo + (i + 0.5) * hx;
      const double xi = x - q.pos[a] - tau * q.vel[a];
      for (int j = 0; j < n_per_axis; ++j) {
        const double v = b.v_lo + (j + 0.5) * hv;
        const double g = std::exp(pair_log_density(tau, xi, v - q.vel[a]));
        m0 += g;
        mx += g * x;
        mv += g * v;
      }
    }
    out[a] = mx / m0;
    out[spec.dim + a] = mv / m0;
  }
}

double kernel_fd_residual(const KernelSpec& spec, double t, const PhasePoint& p, double s,
                          const PhasePoint& q, double h) {
  auto G = [&](double tt, const PhasePoint& pp) { return fundamental_solution(spec, tt, pp, s, q); };
  const double gt = (G(t + h, p) - G(t - h, p)) / (2.0 * h);
  double drift = 0.0, lap = 0.0;
  const double g0 = G(t, p);
  for (int a = 0; a < spec.dim; ++a) {
    PhasePoint pl = p, pr = p;
    pl.pos[a] -= h;
    pr.pos[a] += h;
    drift += p.vel[a] * (G(t, pr) - G(t, pl)) / (2.0 * h);
    PhasePoint vl = p, vr = p;
    vl.vel[a] -= h;
    vr.vel[a] += h;
    lap += (G(t, vr) - 2.0 * g0 + G(t, vl)) / (h * h);
  }
  return std::fabs(gt + drift - lap);
}

double kernel_chapman_defect(const KernelSpec& spec, double t, const PhasePoint& p, double s,
                             const PhasePoint& q, double m, int n_per_axis) {
  if (!(s < m && m < t)) throw std::invalid_argument("kernel_chapman_defect: requires s < m < t");
  if (spec.dim != 1)
    throw std::invalid_argument("kernel_chapman_defect: quadrature oracle implemented for dim 1");
  const double tau = m - s;
  PhasePoint qc = q;
  const QuadBox b = kernel_box(tau, qc, 0);
  // widen to also cover the backward cone of (t, p)
  const double bx_lo = std::min(b.x_lo, p.pos[0] - 10.0), bx_hi = std::max(b.x_hi, p.pos[0] + 10.0);
  const double bv_lo = std::min(b.v_lo, p.vel[0] - 8.0), bv_hi = std::max(b.v_hi, p.vel[0] + 8.0);
  const double hx = (bx_hi - bx_lo) / n_per_axis;
  const double hv = (bv_hi - bv_lo) / n_per_axis;
  const double composed = parallel_sum(static_cast<std::size_t>(n_per_axis), [&](std::size_t i) {
    PhasePoint r;
    r.pos[0] = bx_lo + (i + 0.5) * hx;
    double row = 0.0;
    for (int j = 0; j < n_per_axis; ++j) {
      r.vel[0] = bv_lo + (j + 0.5) * hv;
      row += fundamental_solution(spec, t, p, m, r) * fundamental_solution(spec, m, r, s, q);
    }
    return row;
  }) * hx * hv;
  return std::fabs(composed - fundamental_solution(spec, t, p, s, q));
}

GridField kernel_convolve_initial(const Grid& g, const GridField& u0_level0) {
  KernelSpec spec{g.dim};
  GridField out(g);
  const std::int64_t S = g.slice_size();
  const double vol = g.cell_volume();
  for (std::int64_t j = 0; j < S; ++j) out.slice(0)[j] = u0_level0.slice(0)[j];
  for (int n = 1; n <= g.nt; ++n) {
    const double t = g.t_level(n);
    double* wn = out.slice(n);
    parallel_for_chunks(static_cast<std::size_t>(S), [&](std::size_t b, std::size_t e) {
      for (std::size_t jj = b; jj < e; ++jj) {
        const PhasePoint p = g.point(n, g.spatial_unflat(static_cast<std::int64_t>(jj)));
        double acc = 0.0;
        for (std::int64_t k = 0; k < S; ++k) {
          const double u0 = u0_level0.slice(0)[k];
          if (u0 == 0.0) continue;
          const PhasePoint q = g.point(0, g.spatial_unflat(k));
          acc += fundamental_solution(spec, t, p, g.t_min, q) * u0;
        }
        wn[jj] = acc * vol;
      }
    });
  }
  return out;
}

GridField kernel_convolve_source(const Grid& g, const GridField& G, const std::vector<GridField>& F,
                                 double t_init) {
  KernelSpec spec{g.dim};
  GridField out(g);
  const std::int64_t S = g.slice_size();
  const double vol = g.cell_volume();
  const double dt = g.dt();
  for (int n = 1; n <= g.nt; ++n) {
    const double t = g.t_level(n);
    if (t <= t_init) continue;
    double* wn = out.slice(n);
    parallel_for_chunks(static_cast<std::size_t>(S), [&](std::size_t b, std::size_t e) {
      double grad[kMaxDim];
      for (std::size_t jj = b; jj < e; ++jj) {
        const PhasePoint p = g.point(n, g.spatial_unflat(static_cast<std::int64_t>(jj)));
        double acc = 0.0;
        for (int m = 1; m <= n; ++m) {
          const double tm = g.t_level(m);
          if (tm <= t_init) continue;
          const double s = tm - 0.5 * dt; // midpoint in the source slab keeps tau > 0
          for (std::int64_t k = 0; k < S; ++k) {
            const double gv = G.at(m, k);
            bool has_f = false;
            for (const auto& Fi : F)
              if (Fi.at(m, k) != 0.0) has_f = true;
            if (gv == 0.0 && !has_f) continue;
            const PhasePoint q = g.point(m, g.spatial_unflat(k));
            if (gv != 0.0) acc += fundamental_solution(spec, t, p, s, q) * gv * dt;
            if (has_f) {
              fundamental_solution_grad_source_vel(spec, t, p, s, q, grad);
              // int Gamma d_{v'} F = -int d_{v'} Gamma F
              for (int a = 0; a < g.dim; ++a) acc -= grad[a] * F[a].at(m, k) * dt;
            }
          }
        }
        wn[jj] = acc * vol;
      }
    });
  }
  return out;
}

} // namespace hypoharnack
