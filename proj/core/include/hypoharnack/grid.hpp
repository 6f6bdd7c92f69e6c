#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hypoharnack {

// Phase space is (t, x, v) with dim(x) = dim(v) = dim; the combined spatial
// variable of the operator is z = (x, v) of dimension n = 2*dim.
inline constexpr int kMaxDim = 2;

using Vec = std::array<double, kMaxDim>;

struct PhasePoint {
  double t = 0.0;
  Vec pos{0.0, 0.0};
  Vec vel{0.0, 0.0};
};

/// Squared Euclidean distance on the combined (pos, vel) block.
inline double phase_dist2(const PhasePoint& a, const PhasePoint& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double dx = a.pos[k] - b.pos[k];
    const double dv = a.vel[k] - b.vel[k];
    s += dx * dx + dv * dv;
  }
  return s;
}

struct SpatialIdx {
  std::array<int, kMaxDim> ix{0, 0};
  std::array<int, kMaxDim> iv{0, 0};
};

/// Uniform tensor grid in (t, x, v). Fields live at time levels 0..nt and at
/// spatial cell centers; level n >= 1 represents the time slab
/// (t_level(n-1), t_level(n)], matching the implicit stepping and the
/// half-open cylinder windows. Level 0 carries initial data and has zero
/// quadrature weight.
struct Grid {
  int dim = 1;
  int nt = 64;
  double t_min = -1.0;
  double t_max = 0.0;
  std::array<int, kMaxDim> nx{64, 1};
  std::array<int, kMaxDim> nv{64, 1};
  Vec x_min{-1.0, -1.0}, x_max{1.0, 1.0};
  Vec v_min{-1.0, -1.0}, v_max{1.0, 1.0};

  double dt() const { return (t_max - t_min) / nt; }
  double hx(int a) const { return (x_max[a] - x_min[a]) / nx[a]; }
  double hv(int a) const { return (v_max[a] - v_min[a]) / nv[a]; }
  double t_level(int n) const { return t_min + n * dt(); }
  double x_center(int a, int i) const { return x_min[a] + (i + 0.5) * hx(a); }
  double v_center(int a, int i) const { return v_min[a] + (i + 0.5) * hv(a); }

  /// Volume of one spatial cell (all x and v axes).
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= hx(a) * hv(a);
    return v;
  }

  std::int64_t slice_size() const {
    std::int64_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::int64_t>(nx[a]) * nv[a];
    return s;
  }
  std::int64_t size() const { return static_cast<std::int64_t>(nt + 1) * slice_size(); }

  std::int64_t spatial_flat(const SpatialIdx& s) const {
    std::int64_t f = 0;
    for (int a = 0; a < dim; ++a) f = f * nx[a] + s.ix[a];
    for (int a = 0; a < dim; ++a) f = f * nv[a] + s.iv[a];
    return f;
  }
  SpatialIdx spatial_unflat(std::int64_t f) const {
    SpatialIdx s;
    for (int a = dim - 1; a >= 0; --a) {
      s.iv[a] = static_cast<int>(f % nv[a]);
      f /= nv[a];
    }
    for (int a = dim - 1; a >= 0; --a) {
      s.ix[a] = static_cast<int>(f % nx[a]);
      f /= nx[a];
    }
    return s;
  }

  /// Stride of +1 in velocity axis a within the spatial flat index.
  std::int64_t v_stride(int a) const {
    std::int64_t s = 1;
    for (int b = dim - 1; b > a; --b) s *= nv[b];
    return s;
  }
  /// Stride of +1 in position axis a within the spatial flat index.
  std::int64_t x_stride(int a) const {
    std::int64_t s = 1;
    for (int b = 0; b < dim; ++b) s *= nv[b];
    for (int b = dim - 1; b > a; --b) s *= nx[b];
    return s;
  }

  PhasePoint point(int n, const SpatialIdx& s) const {
    PhasePoint p;
    p.t = t_level(n);
    for (int a = 0; a < dim; ++a) {
      p.pos[a] = x_center(a, s.ix[a]);
      p.vel[a] = v_center(a, s.iv[a]);
    }
    return p;
  }

  bool same_layout(const Grid& o) const;
};

struct GridField {
  Grid grid;
  std::vector<double> data;

  GridField() = default;
  explicit GridField(const Grid& g, double fill = 0.0)
      : grid(g), data(static_cast<std::size_t>(g.size()), fill) {}

  double& at(int n, std::int64_t sflat) {
    return data[static_cast<std::size_t>(n) * grid.slice_size() + sflat];
  }
  double at(int n, std::int64_t sflat) const {
    return data[static_cast<std::size_t>(n) * grid.slice_size() + sflat];
  }
  const double* slice(int n) const { return data.data() + static_cast<std::size_t>(n) * grid.slice_size(); }
  double* slice(int n) { return data.data() + static_cast<std::size_t>(n) * grid.slice_size(); }

  double max_abs() const;
  double max_value() const;

  /// Binary dump: header {dims, spacings/extents, origin, time-range} followed
  /// by the row-major float64 payload.
  void save(const std::string& path) const;
  static GridField load(const std::string& path);
};

/// Evaluate f(t, p) at every grid node (all time levels).
GridField sample(const Grid& g, const std::function<double(const PhasePoint&)>& f);

/// Same extents, cell counts scaled by `factor` (rounded, min 4).
Grid refined(const Grid& g, double factor);

} // namespace hypoharnack
