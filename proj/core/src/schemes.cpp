#include "hypoharnack/schemes.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <stdexcept>
#include <vector>

#include "hypoharnack/parallel.hpp"

namespace hypoharnack {

namespace {
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
} // namespace

struct ImplicitStepper::Impl {
  Grid g;
  SchemeOptions opt;
  SpMat M;
  Eigen::SparseLU<SpMat> lu;
  int assembled_level = -1;
  bool factorized = false;
  bool level_independent = false;

  explicit Impl(const Grid& grid, const SchemeOptions& o) : g(grid), opt(o) {
    const bool coeff_const = !opt.coeffs || opt.coeffs->time_constant;
    level_independent = coeff_const; // transport/viscosity/ext_weight are static
  }

  void assemble(int n) {
    const std::int64_t S = g.slice_size();
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(S) * (3 + 4 * g.dim));
    const double dt = g.dt();
    const auto* C = opt.coeffs;

    for (std::int64_t j = 0; j < S; ++j) {
      const SpatialIdx idx = g.spatial_unflat(j);
      double diag = 1.0 / dt;

      // transport v . Dupw_x
      if (opt.include_transport && opt.drift == DriftKind::Kinetic) {
        for (int a = 0; a < g.dim; ++a) {
          const double va = g.v_center(a, idx.iv[a]);
          const double hx = g.hx(a);
          const std::int64_t sx = g.x_stride(a);
          if (va > 0.0) {
            diag += va / hx;
            if (idx.ix[a] > 0) trip.emplace_back(j, j - sx, -va / hx);
          } else if (va < 0.0) {
            diag -= va / hx;
            if (idx.ix[a] + 1 < g.nx[a]) trip.emplace_back(j, j + sx, va / hx);
          }
        }
      }

      // -Dminus_i(a^{ij} Dplus_j u): upper flux at cell j, lower flux at j-e_i
      for (int i = 0; i < g.dim; ++i) {
        const double hvi = g.hv(i);
        const std::int64_t si = g.v_stride(i);
        for (int jj = 0; jj < g.dim; ++jj) {
          const double hvj = g.hv(jj);
          const std::int64_t sj = g.v_stride(jj);
          const double a_up = C ? C->a_at(n, j, i, jj) : (i == jj ? 1.0 : 0.0);
          // upper flux a_j (u_{j+ej} - u_j) / hvj, divided by hvi
          if (a_up != 0.0) {
            const double w = a_up / (hvi * hvj);
            diag += w;
            if (idx.iv[jj] + 1 < g.nv[jj]) trip.emplace_back(j, j + sj, -w);
          }
          // lower flux from cell j - e_i (zero-extension: absent at the wall):
          // contributes + a_lo u_{j-ei+ej} - a_lo u_{j-ei}, over hvi*hvj
          if (idx.iv[i] > 0) {
            const std::int64_t jm = j - si;
            const double a_lo = C ? C->a_at(n, jm, i, jj) : (i == jj ? 1.0 : 0.0);
            if (a_lo != 0.0) {
              const double w = a_lo / (hvi * hvj);
              const SpatialIdx im = g.spatial_unflat(jm);
              trip.emplace_back(j, jm, -w);
              if (im.iv[jj] + 1 < g.nv[jj]) trip.emplace_back(j, jm + sj, w);
            }
          }
        }
      }

      if (C && opt.include_lower_order) {
        // -Dminus_i(b^i u)
        for (int i = 0; i < g.dim && !C->b.empty(); ++i) {
          const double hvi = g.hv(i);
          const std::int64_t si = g.v_stride(i);
          diag -= C->b_at(n, j, i) / hvi;
          if (idx.iv[i] > 0) trip.emplace_back(j, j - si, C->b_at(n, j - si, i) / hvi);
        }
        // -c^i Dplus_i u
        for (int i = 0; i < g.dim && !C->c.empty(); ++i) {
          const double hvi = g.hv(i);
          const std::int64_t si = g.v_stride(i);
          const double ci = C->c_at(n, j, i);
          diag += ci / hvi;
          if (idx.iv[i] + 1 < g.nv[i]) trip.emplace_back(j, j + si, -ci / hvi);
        }
        // -d u
        diag -= C->d_at(n, j);
      }

      // extra viscosity eps * Laplace in all 2*dim directions
      if (opt.extra_viscosity > 0.0) {
        const double eps = opt.extra_viscosity;
        for (int a = 0; a < g.dim; ++a) {
          const double hx = g.hx(a), hv = g.hv(a);
          const std::int64_t sx = g.x_stride(a), sv = g.v_stride(a);
          diag += 2.0 * eps / (hx * hx) + 2.0 * eps / (hv * hv);
          if (idx.ix[a] > 0) trip.emplace_back(j, j - sx, -eps / (hx * hx));
          if (idx.ix[a] + 1 < g.nx[a]) trip.emplace_back(j, j + sx, -eps / (hx * hx));
          if (idx.iv[a] > 0) trip.emplace_back(j, j - sv, -eps / (hv * hv));
          if (idx.iv[a] + 1 < g.nv[a]) trip.emplace_back(j, j + sv, -eps / (hv * hv));
        }
      }

      // -div(ext_weight grad u), face coefficients from the lower cell
      if (opt.ext_weight) {
        const GridField& w = *opt.ext_weight;
        for (int a = 0; a < 2 * g.dim; ++a) {
          const bool isx = a < g.dim;
          const int ax = isx ? a : a - g.dim;
          const double h = isx ? g.hx(ax) : g.hv(ax);
          const std::int64_t st = isx ? g.x_stride(ax) : g.v_stride(ax);
          const int coord = isx ? idx.ix[ax] : idx.iv[ax];
          const int ncells = isx ? g.nx[ax] : g.nv[ax];
          const double w_up = w.at(n, j);
          diag += w_up / (h * h);
          if (coord + 1 < ncells) trip.emplace_back(j, j + st, -w_up / (h * h));
          if (coord > 0) {
            const double w_lo = w.at(n, j - st);
            diag += w_lo / (h * h);
            trip.emplace_back(j, j - st, -w_lo / (h * h));
          }
        }
      }

      trip.emplace_back(j, j, diag);
    }

    M.resize(S, S);
    M.setFromTriplets(trip.begin(), trip.end());
    lu.compute(M);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("ImplicitStepper: factorization failed");
    assembled_level = n;
    factorized = true;
  }

  void ensure(int n) {
    if (!factorized || (!level_independent && assembled_level != n)) assemble(n);
  }
};

ImplicitStepper::ImplicitStepper(const Grid& g, const SchemeOptions& opt)
    : impl_(std::make_unique<Impl>(g, opt)) {}
ImplicitStepper::~ImplicitStepper() = default;
ImplicitStepper::ImplicitStepper(ImplicitStepper&&) noexcept = default;

const Grid& ImplicitStepper::grid() const { return impl_->g; }

void ImplicitStepper::step(int n, const double* u_prev, const double* rhs_n, double* u_n) {
  impl_->ensure(n);
  const std::int64_t S = impl_->g.slice_size();
  const double dt = impl_->g.dt();
  Eigen::VectorXd rhs(S);
  for (std::int64_t j = 0; j < S; ++j)
    rhs[j] = (u_prev ? u_prev[j] / dt : 0.0) + (rhs_n ? rhs_n[j] : 0.0);
  Eigen::VectorXd sol = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("ImplicitStepper: solve failed");
  for (std::int64_t j = 0; j < S; ++j) u_n[j] = sol[j];
}

void ImplicitStepper::apply(int n, const double* u_n, const double* u_prev, double* out) {
  impl_->ensure(n);
  const std::int64_t S = impl_->g.slice_size();
  const double dt = impl_->g.dt();
  Eigen::Map<const Eigen::VectorXd> u(u_n, S);
  Eigen::VectorXd r = impl_->M * u;
  for (std::int64_t j = 0; j < S; ++j) out[j] = r[j] - (u_prev ? u_prev[j] / dt : 0.0);
}

GridField implicit_solve(const Grid& g, const SchemeOptions& opt, const GridField* rhs,
                         int t_begin, const double* init) {
  GridField out(g);
  const std::int64_t S = g.slice_size();
  if (init)
    for (std::int64_t j = 0; j < S; ++j) out.at(t_begin, j) = init[j];
  ImplicitStepper stepper(g, opt);
  for (int n = t_begin + 1; n <= g.nt; ++n)
    stepper.step(n, out.slice(n - 1), rhs ? rhs->slice(n) : nullptr, out.slice(n));
  return out;
}

void apply_xit(const Grid& g, int axis, const double* in, double* out) {
  const std::int64_t S = g.slice_size();
  const double hv = g.hv(axis);
  const std::int64_t sv = g.v_stride(axis);
  parallel_for_chunks(static_cast<std::size_t>(S), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const SpatialIdx idx = g.spatial_unflat(static_cast<std::int64_t>(j));
      const double lo = idx.iv[axis] > 0 ? in[j - sv] : 0.0;
      out[j] = (in[j] - lo) / hv;
    }
  });
}

void apply_xi(const Grid& g, int axis, const double* in, double* out) {
  const std::int64_t S = g.slice_size();
  const double hv = g.hv(axis);
  const std::int64_t sv = g.v_stride(axis);
  parallel_for_chunks(static_cast<std::size_t>(S), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const SpatialIdx idx = g.spatial_unflat(static_cast<std::int64_t>(j));
      const double hi = idx.iv[axis] + 1 < g.nv[axis] ? in[j + sv] : 0.0;
      out[j] = (hi - in[j]) / hv;
    }
  });
}

GridField scheme_residual(const Grid& g, const SchemeOptions& opt, const GridField& u) {
  GridField out(g);
  ImplicitStepper stepper(g, opt);
  const std::int64_t S = g.slice_size();
  std::vector<double> tmp(static_cast<std::size_t>(S));
  for (int n = 1; n <= g.nt; ++n) {
    stepper.apply(n, u.slice(n), u.slice(n - 1), out.slice(n));
    if (opt.coeffs && opt.include_lower_order) {
      const auto* C = opt.coeffs;
      if (!C->f.empty()) {
        std::vector<double> fslice(static_cast<std::size_t>(S));
        for (int i = 0; i < g.dim; ++i) {
          for (std::int64_t j = 0; j < S; ++j) fslice[j] = C->f_at(n, j, i);
          apply_xit(g, i, fslice.data(), tmp.data());
          for (std::int64_t j = 0; j < S; ++j) out.at(n, j) += tmp[j];
        }
      }
      if (!C->g.data.empty())
        for (std::int64_t j = 0; j < S; ++j) out.at(n, j) += C->g_at(n, j);
    }
  }
  return out;
}

} // namespace hypoharnack
