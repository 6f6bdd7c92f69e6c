#include "hypoharnack/rough.hpp"

#include <cmath>
#include <stdexcept>

#include "hypoharnack/parallel.hpp"

namespace hypoharnack {

namespace {

double bump1(double s) {
  const double a = 1.0 - s * s;
  return a > 0.0 ? a * a * a : 0.0;
}

double dot_pairing(const Grid& g, const GridField& r, const GridField& phi) {
  const double cell = g.cell_volume() * g.dt();
  return cell * parallel_sum(r.data.size(), [&](std::size_t i) {
    return r.data[i] * phi.data[i];
  });
}

void check_interior_support(const Grid& g, const GridField& phi) {
  const std::int64_t S = g.slice_size();
  auto nonzero_level = [&](int n) {
    for (std::int64_t j = 0; j < S; ++j)
      if (phi.at(n, j) != 0.0) return true;
    return false;
  };
  if (nonzero_level(0) || nonzero_level(1) || nonzero_level(g.nt))
    throw std::invalid_argument("apply_weak: phi must vanish at the initial and final levels");
  for (int n = 0; n <= g.nt; ++n)
    for (std::int64_t j = 0; j < S; ++j) {
      if (phi.at(n, j) == 0.0) continue;
      const SpatialIdx idx = g.spatial_unflat(j);
      for (int a = 0; a < g.dim; ++a)
        if (idx.ix[a] == 0 || idx.ix[a] + 1 == g.nx[a] || idx.iv[a] == 0 ||
            idx.iv[a] + 1 == g.nv[a])
          throw std::invalid_argument("apply_weak: phi must vanish near the spatial walls");
    }
}

} // namespace

double apply_weak(const RoughCoefficients& coeffs, const GridField& u, const GridField& phi) {
  const Grid& g = u.grid;
  if (!g.same_layout(phi.grid)) throw std::invalid_argument("apply_weak: grid mismatch");
  check_interior_support(g, phi);
  SchemeOptions opt;
  opt.coeffs = &coeffs;
  const GridField r = scheme_residual(g, opt, u);
  return dot_pairing(g, r, phi);
}

double Bump::eval(const Grid& g, int n, const SpatialIdx& idx) const {
  double v = bump1(static_cast<double>(n - ct) / wt);
  for (int a = 0; a < g.dim && v != 0.0; ++a)
    v *= bump1(static_cast<double>(idx.ix[a] - cx[a]) / wx) *
         bump1(static_cast<double>(idx.iv[a] - cv[a]) / wv);
  return v;
}

std::vector<Bump> make_dictionary(const Grid& g, int size) {
  std::vector<Bump> out;
  const int scales[3] = {3, 6, 12};
  std::vector<std::vector<Bump>> by_scale(3);
  for (int sidx = 0; sidx < 3; ++sidx) {
    const int w = scales[sidx];
    // interior support: time levels [ct-w+1, ct+w-1] within [2, nt-1],
    // cells at least one away from the walls
    const int ct_lo = w + 1, ct_hi = g.nt - w;
    if (ct_lo > ct_hi) continue;
    int wxv = w;
    std::vector<int> xcenters, vcenters, tcenters;
    for (int c = ct_lo; c <= ct_hi; c += std::max(1, w)) tcenters.push_back(c);
    for (int c = wxv + 1; c <= g.nx[0] - wxv - 2; c += std::max(1, wxv)) xcenters.push_back(c);
    for (int c = wxv + 1; c <= g.nv[0] - wxv - 2; c += std::max(1, wxv)) vcenters.push_back(c);
    if (xcenters.empty() || vcenters.empty() || tcenters.empty()) continue;
    for (int tc : tcenters)
      for (int xc : xcenters)
        for (int vc : vcenters) {
          Bump b;
          b.ct = tc;
          b.wt = w;
          b.wx = wxv;
          b.wv = wxv;
          for (int a = 0; a < g.dim; ++a) {
            // reuse the first-axis lattice on the remaining axes (clamped)
            b.cx[a] = std::min(xc, g.nx[a] - wxv - 2);
            b.cv[a] = std::min(vc, g.nv[a] - wxv - 2);
          }
          if (b.cx[0] < wxv + 1 || b.cv[0] < wxv + 1) continue;
          by_scale[sidx].push_back(b);
        }
  }
  // stratified round-robin over scales
  std::size_t k = 0;
  while (static_cast<int>(out.size()) < size) {
    bool any = false;
    for (auto& v : by_scale)
      if (k < v.size() && static_cast<int>(out.size()) < size) {
        out.push_back(v[k]);
        any = true;
      }
    if (!any) break;
    ++k;
  }
  return out;
}

namespace {

double bump_l2(const Grid& g, const Bump& b) {
  double s = 0.0;
  const std::int64_t S = g.slice_size();
  for (int n = std::max(1, b.ct - b.wt + 1); n <= std::min(g.nt, b.ct + b.wt - 1); ++n)
    for (std::int64_t j = 0; j < S; ++j) {
      const double v = b.eval(g, n, g.spatial_unflat(j));
      s += v * v;
    }
  return std::sqrt(s * g.cell_volume() * g.dt());
}

// residual-field pairing over the bump support
double bump_pairing(const Grid& g, const GridField& r, const Bump& b) {
  double s = 0.0;
  const std::int64_t S = g.slice_size();
  for (int n = std::max(1, b.ct - b.wt + 1); n <= std::min(g.nt, b.ct + b.wt - 1); ++n)
    for (std::int64_t j = 0; j < S; ++j) {
      const double v = b.eval(g, n, g.spatial_unflat(j));
      if (v != 0.0) s += r.at(n, j) * v;
    }
  return s * g.cell_volume() * g.dt();
}

void classify(WeakResidual& wr, double tol) {
  wr.tol = tol;
  wr.worst_pos = -std::numeric_limits<double>::infinity();
  wr.worst_neg = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < wr.values.size(); ++k) {
    const double scaled = wr.values[k] / std::max(wr.phi_norms[k], 1e-300);
    if (scaled > wr.worst_pos) {
      wr.worst_pos = scaled;
      wr.worst_phi = static_cast<int>(k);
    }
    wr.worst_neg = std::min(wr.worst_neg, scaled);
  }
  const bool sub = wr.worst_pos <= tol;
  const bool sup = wr.worst_neg >= -tol;
  if (sub && sup)
    wr.certificate = SignCertificate::Subsolution; // both; degenerate residual
  else if (sub)
    wr.certificate = SignCertificate::Subsolution;
  else if (sup)
    wr.certificate = SignCertificate::Supersolution;
  else
    wr.certificate = SignCertificate::Neither;
}

} // namespace

WeakResidual certify_sign(const RoughCoefficients& coeffs, const GridField& u,
                          int dictionary_size, double tol) {
  const Grid& g = u.grid;
  SchemeOptions opt;
  opt.coeffs = &coeffs;
  const GridField r = scheme_residual(g, opt, u);
  const auto dict = make_dictionary(g, dictionary_size);
  WeakResidual wr;
  wr.values.resize(dict.size());
  wr.phi_norms.resize(dict.size());
  parallel_for_chunks(dict.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      wr.values[k] = bump_pairing(g, r, dict[k]);
      wr.phi_norms[k] = bump_l2(g, dict[k]);
    }
  });
  classify(wr, tol);
  return wr;
}

EvolveResult evolve(const RoughCoefficients& coeffs, const GridField& u0_level0) {
  const Grid& g = u0_level0.grid;
  const std::int64_t S = g.slice_size();
  SchemeOptions opt;
  opt.coeffs = &coeffs;

  // rhs of Lop(u) = -(Dminus f + g)
  GridField rhs(g);
  if (!coeffs.f.empty() || !coeffs.g.data.empty()) {
    std::vector<double> fslice(static_cast<std::size_t>(S)), tmp(static_cast<std::size_t>(S));
    for (int n = 1; n <= g.nt; ++n) {
      for (int i = 0; i < g.dim && !coeffs.f.empty(); ++i) {
        for (std::int64_t j = 0; j < S; ++j) fslice[j] = coeffs.f_at(n, j, i);
        apply_xit(g, i, fslice.data(), tmp.data());
        for (std::int64_t j = 0; j < S; ++j) rhs.at(n, j) -= tmp[j];
      }
      if (!coeffs.g.data.empty())
        for (std::int64_t j = 0; j < S; ++j) rhs.at(n, j) -= coeffs.g_at(n, j);
    }
  }

  EvolveResult out;
  out.u = implicit_solve(g, opt, &rhs, 0, u0_level0.slice(0));
  const GridField res = scheme_residual(g, opt, out.u);
  out.residual_max = res.max_abs();
  double vmax = 0.0;
  for (int a = 0; a < g.dim; ++a)
    vmax = std::max(vmax, std::max(std::fabs(g.v_min[a]), std::fabs(g.v_max[a])) / g.hx(a));
  out.cfl = vmax * g.dt();
  return out;
}

ComposeResult compose_transform(const RoughCoefficients& coeffs, const GridField& u,
                                const Transform& phi, bool supersolution_input) {
  const bool needs_nonincreasing = supersolution_input;
  if (needs_nonincreasing && phi.nondecreasing())
    throw std::invalid_argument(
        "compose_transform: supersolution input requires a nonincreasing transform");
  if (!needs_nonincreasing && !phi.nondecreasing())
    throw std::invalid_argument(
        "compose_transform: subsolution input requires a nondecreasing transform");

  const Grid& g = u.grid;
  const std::int64_t S = g.slice_size();
  ComposeResult out;
  out.u = u;
  out.phi = phi;
  out.supersolution_input = supersolution_input;
  out.v = GridField(g);
  out.defect = GridField(g);

  RoughCoefficients& nc = out.new_coeffs;
  nc.dim = coeffs.dim;
  nc.lambda = coeffs.lambda;
  nc.a = coeffs.a;
  nc.c = coeffs.c;
  nc.Lambda = coeffs.Lambda;
  nc.time_constant = false; // f~, g~ inherit the time dependence of u
  nc.f.assign(static_cast<std::size_t>(g.dim), GridField(g));
  nc.g = GridField(g);
  out.fb.assign(static_cast<std::size_t>(g.dim), GridField(g));
  out.gd = GridField(g);

  std::vector<double> dplus(static_cast<std::size_t>(S));
  for (int n = 0; n <= g.nt; ++n) {
    // |X u|^2 by forward differences
    std::vector<double> xu2(static_cast<std::size_t>(S), 0.0);
    for (int a = 0; a < g.dim; ++a) {
      apply_xi(g, a, u.slice(n), dplus.data());
      for (std::int64_t j = 0; j < S; ++j) xu2[j] += dplus[j] * dplus[j];
    }
    for (std::int64_t j = 0; j < S; ++j) {
      const double uz = u.at(n, j);
      const double p1 = phi.dphi(uz);
      const double p2 = phi.ddphi(uz);
      out.v.at(n, j) = phi.phi(uz);
      double fbu2 = 0.0;
      for (int i = 0; i < g.dim; ++i) {
        const double fb = coeffs.f_at(n, j, i) - coeffs.b_at(n, j, i) * uz;
        out.fb[i].at(n, j) = fb;
        nc.f[i].at(n, j) = p1 * fb;
        fbu2 += fb * fb;
      }
      const double gd = coeffs.g_at(n, j) - coeffs.d_at(n, j) * uz;
      out.gd.at(n, j) = gd;
      nc.g.at(n, j) = p1 * gd - (p2 / (2.0 * coeffs.lambda)) * fbu2;
      out.defect.at(n, j) = p2 * (coeffs.lambda / 2.0) * xu2[j];
    }
  }
  return out;
}

ChainCertification certify_compose(const ComposeResult& cr, int dictionary_size, double tol,
                                   bool check_strengthened) {
  const Grid& g = cr.u.grid;
  const auto dict = make_dictionary(g, dictionary_size);
  const RoughCoefficients& nc = cr.new_coeffs;
  const double lambda = nc.lambda;
  const double cell = g.cell_volume() * g.dt();
  const double dt = g.dt();

  ChainCertification out;
  out.strengthened_checked = check_strengthened;
  out.plain.values.assign(dict.size(), 0.0);
  out.with_defect.values.assign(dict.size(), 0.0);
  out.strengthened.values.assign(dict.size(), 0.0);
  out.plain.phi_norms.assign(dict.size(), 0.0);

  parallel_for_chunks(dict.size(), [&](std::size_t kb, std::size_t ke) {
    for (std::size_t k = kb; k < ke; ++k) {
      const Bump& b = dict[k];
      double val = 0.0, dpair = 0.0, spair = 0.0, nrm2 = 0.0;
      const int n_lo = std::max(1, b.ct - b.wt + 1);
      const int n_hi = std::min(g.nt, b.ct + b.wt - 1);

      // bounding box: support plus one cell below in each velocity axis
      SpatialIdx lo, hi;
      for (int a = 0; a < g.dim; ++a) {
        lo.ix[a] = std::max(0, b.cx[a] - b.wx + 1);
        hi.ix[a] = std::min(g.nx[a] - 1, b.cx[a] + b.wx - 1);
        lo.iv[a] = std::max(0, b.cv[a] - b.wv);
        hi.iv[a] = std::min(g.nv[a] - 1, b.cv[a] + b.wv - 1);
      }

      for (int n = n_lo; n <= n_hi; ++n) {
        const double* un = cr.u.slice(n);
        const double* vn = cr.v.slice(n);
        const double* vm = cr.v.slice(n - 1);

        SpatialIdx idx = lo;
        bool done = false;
        while (!done) {
          const std::int64_t j = g.spatial_flat(idx);
          const double ph = b.eval(g, n, idx);
          double phup[kMaxDim] = {0.0, 0.0};
          for (int i = 0; i < g.dim; ++i) {
            SpatialIdx up = idx;
            up.iv[i] += 1;
            phup[i] = (up.iv[i] < g.nv[i]) ? b.eval(g, n, up) : 0.0;
          }

          const double uz = un[j];
          const double p1 = cr.phi.dphi(uz);
          nrm2 += ph * ph;

          if (ph != 0.0) {
            val += (vn[j] - vm[j]) / dt * ph;
            for (int a = 0; a < g.dim; ++a) {
              const double va = g.v_center(a, idx.iv[a]);
              const std::int64_t sx = g.x_stride(a);
              double dv;
              if (va > 0.0)
                dv = (vn[j] - (idx.ix[a] > 0 ? vn[j - sx] : 0.0)) / g.hx(a);
              else
                dv = ((idx.ix[a] + 1 < g.nx[a] ? vn[j + sx] : 0.0) - vn[j]) / g.hx(a);
              val += va * dv * ph;
            }
            double cgrad = 0.0;
            for (int i = 0; i < g.dim; ++i) {
              const std::int64_t sv = g.v_stride(i);
              const double du = ((idx.iv[i] + 1 < g.nv[i] ? un[j + sv] : 0.0) - uz) / g.hv(i);
              cgrad += nc.c_at(n, j, i) * p1 * du;
            }
            double fbu2 = 0.0;
            for (int i = 0; i < g.dim; ++i) {
              const double fb = cr.fb[i].at(n, j);
              fbu2 += fb * fb;
            }
            // g~0 = full g~ plus its pointwise Young part
            const double g0v = nc.g.at(n, j) + (cr.phi.ddphi(uz) / (2.0 * lambda)) * fbu2;
            val += (g0v - cgrad) * ph;
          }

          for (int i = 0; i < g.dim; ++i) {
            const std::int64_t svi = g.v_stride(i);
            const double hvi = g.hv(i);
            const double dphi_i = (phup[i] - ph) / hvi;
            const double u_up = idx.iv[i] + 1 < g.nv[i] ? un[j + svi] : 0.0;
            const double du_i = (u_up - uz) / hvi;

            if (dphi_i != 0.0) {
              double flux = -nc.f[i].at(n, j);
              for (int jj = 0; jj < g.dim; ++jj) {
                const std::int64_t svj = g.v_stride(jj);
                const double du_j =
                    ((idx.iv[jj] + 1 < g.nv[jj] ? un[j + svj] : 0.0) - uz) / g.hv(jj);
                flux += nc.a_at(n, j, i, jj) * p1 * du_j;
              }
              val += flux * dphi_i;
            }

            if (phup[i] != 0.0) {
              const double chord = cr.phi.dphi_chord(uz, u_up);
              const double fb_i = cr.fb[i].at(n, j);
              // Young part of g~ at the shifted cell, chord second derivative
              val -= (chord / (2.0 * lambda)) * fb_i * fb_i * phup[i];
              dpair += (lambda / 2.0) * chord * du_i * du_i * phup[i];
              if (check_strengthened) {
                const double p1up = cr.phi.dphi(u_up);
                const double pmin2 = std::min(p1 * p1, p1up * p1up);
                spair += (lambda / 2.0) * pmin2 * du_i * du_i * phup[i];
              }
            }
          }

          // advance the multi-index over the box
          done = true;
          for (int a = 2 * g.dim - 1; a >= 0; --a) {
            const bool isv = a >= g.dim;
            const int ax = isv ? a - g.dim : a;
            int& cur = isv ? idx.iv[ax] : idx.ix[ax];
            const int top = isv ? hi.iv[ax] : hi.ix[ax];
            const int bot = isv ? lo.iv[ax] : lo.ix[ax];
            if (cur < top) {
              ++cur;
              done = false;
              break;
            }
            cur = bot;
          }
        }
      }
      out.plain.values[k] = val * cell;
      out.with_defect.values[k] = (val + dpair) * cell;
      out.strengthened.values[k] = (val + spair) * cell;
      out.plain.phi_norms[k] = std::sqrt(nrm2 * cell);
    }
  });

  out.with_defect.phi_norms = out.plain.phi_norms;
  out.strengthened.phi_norms = out.plain.phi_norms;
  classify(out.plain, tol);
  classify(out.with_defect, tol);
  classify(out.strengthened, tol);
  return out;
}

} // namespace hypoharnack
