#include "hypoharnack/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypoharnack/parallel.hpp"

namespace hypoharnack {

namespace {

// radical-inverse (van der Corput) in the given base
double radical_inverse(unsigned i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

// 16 fixed Halton offsets in [0,1)^5: (t, x0, x1, v0, v1)
struct SampleSet {
  double off[16][5];
  SampleSet() {
    const unsigned bases[5] = {2, 3, 5, 7, 11};
    for (unsigned k = 0; k < 16; ++k)
      for (unsigned d = 0; d < 5; ++d) off[k][d] = radical_inverse(k + 1, bases[d]);
  }
};
const SampleSet& samples() {
  static const SampleSet s;
  return s;
}

} // namespace

RegionWeights cylinder_weights(const Grid& g, const Cylinder& c, double t_clip) {
  RegionWeights out;
  out.grid = &g;
  out.w.assign(static_cast<std::size_t>(g.size()), 0.0);

  const double t_hi = std::min(c.base.t, t_clip);
  const double t_lo = c.base.t - c.s;
  const std::int64_t S = g.slice_size();
  const double dt = g.dt();
  const double vol = g.cell_volume();
  const auto& smp = samples();

  for (int n = 1; n <= g.nt; ++n) {
    const double slab_lo = g.t_level(n - 1);
    const double slab_hi = g.t_level(n);
    if (slab_hi <= t_lo || slab_lo >= t_hi) continue; // half-open windows
    const bool slab_inside = (slab_lo >= t_lo) && (slab_hi <= t_hi);
    double* wn = out.w.data() + static_cast<std::size_t>(n) * S;

    parallel_for_chunks(static_cast<std::size_t>(S), [&](std::size_t b, std::size_t e) {
      for (std::size_t jj = b; jj < e; ++jj) {
        const auto idx = g.spatial_unflat(static_cast<std::int64_t>(jj));
        PhasePoint center = g.point(n, idx);
        const double t_mid = 0.5 * (slab_lo + slab_hi);
        center.t = t_mid;

        // Lipschitz pad: cell-extent effect on the transported distance
        double pad = 0.0, vmax = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          pad += 0.5 * g.hx(a) + 0.5 * g.hv(a) * (1.0 + c.s);
          vmax = std::max(vmax, std::fabs(center.vel[a]) + 0.5 * g.hv(a));
        }
        pad += 0.5 * dt * vmax;

        const PhasePoint top = flow(c.drift, center.t, c.base.t, center);
        const double rho = std::sqrt(phase_dist2(top, c.base, c.dim));
        if (slab_inside && rho <= c.r - pad) {
          wn[jj] = 1.0;
          continue;
        }
        if (rho >= c.r + pad) continue;

        int cnt = 0;
        for (int k = 0; k < 16; ++k) {
          PhasePoint q;
          q.t = slab_lo + smp.off[k][0] * dt;
          if (!(q.t > t_lo && q.t <= t_hi)) continue;
          for (int a = 0; a < g.dim; ++a) {
            q.pos[a] = g.x_min[a] + (idx.ix[a] + smp.off[k][1 + a]) * g.hx(a);
            q.vel[a] = g.v_min[a] + (idx.iv[a] + smp.off[k][3 + a]) * g.hv(a);
          }
          const PhasePoint qt = flow(c.drift, q.t, c.base.t, q);
          if (phase_dist2(qt, c.base, c.dim) < c.r * c.r) ++cnt;
        }
        wn[jj] = cnt / 16.0;
      }
    });
  }

  out.measure = parallel_sum(out.w.size(), [&](std::size_t i) { return out.w[i]; }) * vol * dt;
  return out;
}

RegionWeights box_weights(const Grid& g) {
  RegionWeights out;
  out.grid = &g;
  out.w.assign(static_cast<std::size_t>(g.size()), 1.0);
  std::fill(out.w.begin(), out.w.begin() + g.slice_size(), 0.0);
  out.measure = static_cast<double>(g.nt) * g.slice_size() * g.cell_volume() * g.dt();
  return out;
}

RegionWeights intersect(const RegionWeights& w, const GridField& f, bool (*pred)(double)) {
  RegionWeights out;
  out.grid = w.grid;
  out.w.resize(w.w.size());
  for (std::size_t i = 0; i < w.w.size(); ++i) out.w[i] = pred(f.data[i]) ? w.w[i] : 0.0;
  out.measure = parallel_sum(out.w.size(), [&](std::size_t i) { return out.w[i]; }) *
                w.grid->cell_volume() * w.grid->dt();
  return out;
}

double measure_above(const RegionWeights& w, const GridField& f, double threshold) {
  const double s = parallel_sum(
      w.w.size(), [&](std::size_t i) { return f.data[i] > threshold ? w.w[i] : 0.0; });
  return s * w.grid->cell_volume() * w.grid->dt();
}

double lp_norm(const GridField& f, const RegionWeights& w, double p) {
  if (p == kInfExponent) {
    const double m = parallel_max(w.w.size(), [&](std::size_t i) {
      return w.w[i] > 0.0 ? std::fabs(f.data[i]) : 0.0;
    });
    return std::max(m, 0.0);
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or inf");
  const double cell = w.grid->cell_volume() * w.grid->dt();
  const double s = parallel_sum(w.w.size(), [&](std::size_t i) {
    return w.w[i] > 0.0 ? w.w[i] * std::pow(std::fabs(f.data[i]), p) : 0.0;
  });
  return std::pow(s * cell, 1.0 / p);
}

double lp_norm_product(const GridField& f, const GridField& g, const RegionWeights& w, double p) {
  if (p == kInfExponent) {
    const double m = parallel_max(w.w.size(), [&](std::size_t i) {
      return w.w[i] > 0.0 ? std::fabs(f.data[i] * g.data[i]) : 0.0;
    });
    return std::max(m, 0.0);
  }
  const double cell = w.grid->cell_volume() * w.grid->dt();
  const double s = parallel_sum(w.w.size(), [&](std::size_t i) {
    return w.w[i] > 0.0 ? w.w[i] * std::pow(std::fabs(f.data[i] * g.data[i]), p) : 0.0;
  });
  return std::pow(s * cell, 1.0 / p);
}

double max_over(const GridField& f, const RegionWeights& w) {
  return parallel_max(w.w.size(), [&](std::size_t i) {
    return w.w[i] > 0.0 ? f.data[i] : -std::numeric_limits<double>::infinity();
  });
}

double min_over(const GridField& f, const RegionWeights& w) {
  return -parallel_max(w.w.size(), [&](std::size_t i) {
    return w.w[i] > 0.0 ? -f.data[i] : -std::numeric_limits<double>::infinity();
  });
}

double integral(const GridField& f, const RegionWeights& w) {
  const double cell = w.grid->cell_volume() * w.grid->dt();
  return cell *
         parallel_sum(w.w.size(), [&](std::size_t i) { return w.w[i] * f.data[i]; });
}

} // namespace hypoharnack
