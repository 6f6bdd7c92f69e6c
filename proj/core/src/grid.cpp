#include "hypoharnack/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "hypoharnack/parallel.hpp"

namespace hypoharnack {

bool Grid::same_layout(const Grid& o) const {
  if (dim != o.dim || nt != o.nt || t_min != o.t_min || t_max != o.t_max) return false;
  for (int a = 0; a < dim; ++a) {
    if (nx[a] != o.nx[a] || nv[a] != o.nv[a]) return false;
    if (x_min[a] != o.x_min[a] || x_max[a] != o.x_max[a]) return false;
    if (v_min[a] != o.v_min[a] || v_max[a] != o.v_max[a]) return false;
  }
  return true;
}

double GridField::max_abs() const {
  return parallel_max(data.size(), [this](std::size_t i) { return std::fabs(data[i]); });
}

double GridField::max_value() const {
  return parallel_max(data.size(), [this](std::size_t i) { return data[i]; });
}

namespace {
constexpr std::uint32_t kMagic = 0x48484746u; // "HHGF"
constexpr std::uint32_t kFormatVersion = 1u;

void put_i32(FILE* f, std::int32_t v) { std::fwrite(&v, sizeof v, 1, f); }
void put_u32(FILE* f, std::uint32_t v) { std::fwrite(&v, sizeof v, 1, f); }
void put_f64(FILE* f, double v) { std::fwrite(&v, sizeof v, 1, f); }

std::int32_t get_i32(FILE* f) {
  std::int32_t v = 0;
  if (std::fread(&v, sizeof v, 1, f) != 1) throw std::runtime_error("GridField: truncated header");
  return v;
}
std::uint32_t get_u32(FILE* f) {
  std::uint32_t v = 0;
  if (std::fread(&v, sizeof v, 1, f) != 1) throw std::runtime_error("GridField: truncated header");
  return v;
}
double get_f64(FILE* f) {
  double v = 0;
  if (std::fread(&v, sizeof v, 1, f) != 1) throw std::runtime_error("GridField: truncated header");
  return v;
}
} // namespace

void GridField::save(const std::string& path) const {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("GridField: cannot open " + path);
  put_u32(f, kMagic);
  put_u32(f, kFormatVersion);
  put_i32(f, grid.dim);
  put_i32(f, grid.nt);
  for (int a = 0; a < grid.dim; ++a) put_i32(f, grid.nx[a]);
  for (int a = 0; a < grid.dim; ++a) put_i32(f, grid.nv[a]);
  put_f64(f, grid.t_min);
  put_f64(f, grid.t_max);
  for (int a = 0; a < grid.dim; ++a) {
    put_f64(f, grid.x_min[a]);
    put_f64(f, grid.x_max[a]);
  }
  for (int a = 0; a < grid.dim; ++a) {
    put_f64(f, grid.v_min[a]);
    put_f64(f, grid.v_max[a]);
  }
  std::fwrite(data.data(), sizeof(double), data.size(), f);
  std::fclose(f);
}

GridField GridField::load(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("GridField: cannot open " + path);
  if (get_u32(f) != kMagic) {
    std::fclose(f);
    throw std::runtime_error("GridField: bad magic in " + path);
  }
  if (get_u32(f) != kFormatVersion) {
    std::fclose(f);
    throw std::runtime_error("GridField: unsupported format version in " + path);
  }
  Grid g;
  g.dim = get_i32(f);
  g.nt = get_i32(f);
  for (int a = 0; a < g.dim; ++a) g.nx[a] = get_i32(f);
  for (int a = 0; a < g.dim; ++a) g.nv[a] = get_i32(f);
  g.t_min = get_f64(f);
  g.t_max = get_f64(f);
  for (int a = 0; a < g.dim; ++a) {
    g.x_min[a] = get_f64(f);
    g.x_max[a] = get_f64(f);
  }
  for (int a = 0; a < g.dim; ++a) {
    g.v_min[a] = get_f64(f);
    g.v_max[a] = get_f64(f);
  }
  GridField out(g);
  if (std::fread(out.data.data(), sizeof(double), out.data.size(), f) != out.data.size()) {
    std::fclose(f);
    throw std::runtime_error("GridField: truncated payload in " + path);
  }
  std::fclose(f);
  return out;
}

Grid refined(const Grid& g, double factor) {
  Grid out = g;
  auto scale = [factor](int n) { return std::max(4, static_cast<int>(std::lround(n * factor))); };
  out.nt = scale(g.nt);
  for (int a = 0; a < g.dim; ++a) {
    out.nx[a] = scale(g.nx[a]);
    out.nv[a] = scale(g.nv[a]);
  }
  return out;
}

GridField sample(const Grid& g, const std::function<double(const PhasePoint&)>& f) {
  GridField out(g);
  const std::int64_t S = g.slice_size();
  for (int n = 0; n <= g.nt; ++n) {
    double* s = out.slice(n);
    parallel_for_chunks(static_cast<std::size_t>(S), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j)
        s[j] = f(g.point(n, g.spatial_unflat(static_cast<std::int64_t>(j))));
    });
  }
  return out;
}

} // namespace hypoharnack
