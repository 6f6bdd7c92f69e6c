#include "hypoharnack/harnack.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "hypoharnack/parallel.hpp"
#include "hypoharnack/schemes.hpp"

namespace hypoharnack {

namespace {

GridField vector_abs(const std::vector<GridField>& fs, const Grid& g) {
  GridField out(g);
  if (fs.empty()) return out;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    double s = 0.0;
    for (const auto& f : fs) s += f.data[i] * f.data[i];
    out.data[i] = std::sqrt(s);
  }
  return out;
}

GridField xgrad_abs(const GridField& f) {
  const Grid& g = f.grid;
  GridField out(g);
  const std::int64_t S = g.slice_size();
  std::vector<double> tmp(static_cast<std::size_t>(S));
  for (int n = 0; n <= g.nt; ++n) {
    for (int a = 0; a < g.dim; ++a) {
      apply_xi(g, a, f.slice(n), tmp.data());
      for (std::int64_t j = 0; j < S; ++j) out.at(n, j) += tmp[j] * tmp[j];
    }
    for (std::int64_t j = 0; j < S; ++j) out.at(n, j) = std::sqrt(out.at(n, j));
  }
  return out;
}

GridField lambda_field(const Grid& g, const RoughCoefficients& c) {
  GridField out(g);
  const std::int64_t S = g.slice_size();
  for (int n = 0; n <= g.nt; ++n)
    for (std::int64_t j = 0; j < S; ++j) out.at(n, j) = c.Lambda_at(n, j);
  return out;
}

} // namespace

EstimateReport l1_gain(const ComposeResult& vres, const SigmaDomains& sig,
                       double g_delta_zero, double evo_rtol) {
  const Grid& g = vres.v.grid;
  const std::int64_t S = g.slice_size();
  const double lambda = vres.new_coeffs.lambda;
  const double vol_sp = g.cell_volume();
  const double dt = g.dt();

  // sampled cutoff values and X eta_R
  GridField eta(g), xeta2(g);
  for (int n = 0; n <= g.nt; ++n)
    for (std::int64_t j = 0; j < S; ++j) {
      const PhasePoint p = g.point(n, g.spatial_unflat(j));
      eta.at(n, j) = sig.eta.eval(p);
      double grad[kMaxDim];
      sig.eta.grad_v(p, grad);
      double s2 = 0.0;
      for (int a = 0; a < g.dim; ++a) s2 += grad[a] * grad[a];
      xeta2.at(n, j) = s2;
    }

  const GridField xv = xgrad_abs(vres.v);
  const GridField lam = lambda_field(g, vres.new_coeffs);
  const GridField fabsf = vector_abs(vres.new_coeffs.f, g);
  const GridField cabs = vector_abs(vres.new_coeffs.c, g);

  // slice quantities
  std::vector<double> E(static_cast<std::size_t>(g.nt) + 1, 0.0);
  double cR = 0.0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  int worst_slice = -1;
  for (int n = 0; n <= g.nt; ++n) {
    double e = 0.0, slice_eta2 = 0.0;
    for (std::int64_t j = 0; j < S; ++j) {
      const double e2 = eta.at(n, j) * eta.at(n, j);
      e += vres.v.at(n, j) * e2;
      slice_eta2 += e2;
    }
    E[static_cast<std::size_t>(n)] = e * vol_sp;
    cR = std::max(cR, slice_eta2 * vol_sp);
  }
  for (int n = 1; n <= g.nt; ++n) {
    double grad_term = 0.0, lam_term = 0.0, f_term = 0.0, c_term = 0.0, g_term = 0.0;
    for (std::int64_t j = 0; j < S; ++j) {
      const double et = eta.at(n, j);
      const double e2 = et * et;
      grad_term += xv.at(n, j) * xv.at(n, j) * e2;
      lam_term += lam.at(n, j) * lam.at(n, j) * xeta2.at(n, j);
      f_term += fabsf.at(n, j) * 2.0 * et * std::sqrt(xeta2.at(n, j));
      c_term += cabs.at(n, j) * cabs.at(n, j) * e2;
      if (e2 > 0.0 || xeta2.at(n, j) > 0.0) g_term += std::fabs(vres.new_coeffs.g_at(n, j));
    }
    grad_term *= vol_sp;
    lam_term *= vol_sp;
    f_term *= vol_sp;
    c_term *= vol_sp;
    g_term *= vol_sp;
    const double dE = (E[static_cast<std::size_t>(n)] - E[static_cast<std::size_t>(n - 1)]) / dt;
    const double viol = dE + (lambda / 4.0) * grad_term -
                        ((2.0 / lambda) * lam_term + f_term + (2.0 / lambda) * c_term + g_term);
    if (viol > worst_violation) {
      worst_violation = viol;
      worst_slice = n;
    }
  }

  EstimateReport rep;
  rep.name = "l1_gain";
  const RegionWeights w_tilde = cylinder_weights(g, sig.sigma_tilde);
  const RegionWeights w_sig = cylinder_weights(g, sig.sigma);
  const double lhs1 = lp_norm(xv, w_tilde, 2.0);
  rep.lhs = lhs1 * lhs1;
  const double lam2 = lp_norm(lam, w_sig, 2.0);
  rep.rhs = cR * g_delta_zero + lam2 * lam2 + lp_norm(fabsf, w_sig, 1.0) +
            std::pow(lp_norm(cabs, w_sig, 2.0), 2.0) +
            lp_norm(vres.new_coeffs.g, w_sig, 1.0);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;

  const double scale = std::max(1.0, cR * g_delta_zero);
  rep.extra("C_R", cR);
  rep.extra("g_delta_zero", g_delta_zero);
  rep.extra("evo_violation", worst_violation);
  rep.extra("evo_worst_slice", static_cast<double>(worst_slice));
  rep.extra("evo_tolerance", evo_rtol * scale);
  rep.passed = worst_violation <= evo_rtol * scale;
  if (!rep.passed) {
    std::ostringstream msg;
    msg << "differential inequality violated at slice " << worst_slice << " by "
        << worst_violation;
    rep.note = msg.str();
  }
  return rep;
}

EstimateReport dual_gain(const ComposeResult& vres, const DualProblem& dual,
                         const SigmaDomains& sig, const Exponents& exps, double mu0,
                         double g_delta_zero, const GridField& E_indicator) {
  const Grid& g = vres.v.grid;
  const std::int64_t S = g.slice_size();
  const double vol_sp = g.cell_volume();

  EstimateReport rep;
  rep.name = "dual_gain";

  // v vanishes identically on E = {u >= 1}
  double v_on_E = 0.0;
  for (std::size_t i = 0; i < vres.v.data.size(); ++i)
    if (E_indicator.data[i] > 0.0) v_on_E = std::max(v_on_E, std::fabs(vres.v.data[i]));
  rep.extra("v_on_E_max", v_on_E);
  if (v_on_E > 1e-12) {
    rep.passed = false;
    rep.note = "v does not vanish on E (E must come from {u >= 1})";
    return rep;
  }

  // K(t) = int v w eta~_R dx
  GridField eta_t(g);
  for (int n = 0; n <= g.nt; ++n)
    for (std::int64_t j = 0; j < S; ++j)
      eta_t.at(n, j) = sig.eta_tilde.eval(g.point(n, g.spatial_unflat(j)));
  double sup_K = 0.0;
  for (int n = 0; n <= g.nt; ++n) {
    if (g.t_level(n) < sig.sigma.base.t - 0.5) continue;
    double k = 0.0;
    for (std::int64_t j = 0; j < S; ++j)
      k += vres.v.at(n, j) * dual.w.at(n, j) * eta_t.at(n, j);
    sup_K = std::max(sup_K, k * vol_sp);
  }

  const Cylinder c_half{sig.sigma.base, 0.5, 2.0, DriftKind::Kinetic, g.dim};
  const RegionWeights w_half = cylinder_weights(g, c_half);
  const double v_l1 = lp_norm(vres.v, w_half, 1.0);
  const double v_l1_bound = mu0 > 0.0 ? sup_K / mu0 : std::numeric_limits<double>::infinity();
  rep.extra("sup_K", sup_K);
  rep.extra("mu0", mu0);
  rep.extra("v_l1_half", v_l1);
  rep.extra("v_l1_bound", v_l1_bound);

  // K-evolution bound with the Hessian term G_delta(0) ||w||_L1 / R
  const RegionWeights w_tilde = cylinder_weights(g, sig.sigma_tilde);
  const RegionWeights w_sig = cylinder_weights(g, sig.sigma);
  const GridField xv = xgrad_abs(vres.v);
  const GridField xw = xgrad_abs(dual.w);
  const GridField lam = lambda_field(g, vres.new_coeffs);
  const GridField fabsf = vector_abs(vres.new_coeffs.f, g);
  const GridField cabs = vector_abs(vres.new_coeffs.c, g);

  GridField one_lam_xw(g), one_lam_w(g), c_w(g);
  for (std::size_t i = 0; i < one_lam_w.data.size(); ++i) {
    one_lam_xw.data[i] = (1.0 + lam.data[i]) * xw.data[i];
    one_lam_w.data[i] = (1.0 + lam.data[i]) * dual.w.data[i];
    c_w.data[i] = cabs.data[i] * dual.w.data[i];
  }
  const double xv_l2 = lp_norm(xv, w_tilde, 2.0);
  const double k_bound = xv_l2 * (lp_norm(one_lam_xw, w_tilde, 2.0) +
                                  lp_norm(one_lam_w, w_tilde, 2.0) +
                                  lp_norm(c_w, w_tilde, 2.0)) +
                         g_delta_zero * dual.mass_l1 / sig.R +
                         lp_norm(fabsf, w_sig, 2.0) *
                             (lp_norm(dual.w, w_sig, exps.p2) + lp_norm(xw, w_sig, exps.p2)) +
                         lp_norm(vres.new_coeffs.g, w_sig, 2.0) * lp_norm(dual.w, w_sig, exps.p2);
  rep.extra("k_evolution_bound", k_bound);
  rep.extra("k_bound_ratio", k_bound > 0.0 ? sup_K / k_bound : 0.0);

  // final display: ||v||_{L1(C_{1/2,2})}^2 <= (G_delta(0)/R)^2 + C(R)[...]
  rep.lhs = v_l1 * v_l1;
  const double coeff = 1.0 + lp_norm(lam, w_tilde, exps.q_bar2) +
                       lp_norm(cabs, w_tilde, exps.q_bar2);
  rep.rhs = std::pow(g_delta_zero / sig.R, 2.0) + coeff * coeff * xv_l2 * xv_l2 +
            std::pow(lp_norm(fabsf, w_tilde, 2.0), 2.0) +
            std::pow(lp_norm(vres.new_coeffs.g, w_tilde, 2.0), 2.0);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  rep.passed = v_l1 <= v_l1_bound * (1.0 + 1e-6) + 1e-12;
  if (!rep.passed) rep.note = "mu0 conversion bound violated";
  return rep;
}

std::string certificate_to_json(const HarnackCertificate& c) {
  nlohmann::ordered_json j;
  j["mu"] = c.mu;
  j["delta"] = c.delta;
  j["R"] = c.R;
  j["eta"] = c.eta;
  j["passed"] = c.passed;
  j["eps_data"] = c.eps_data;
  j["mu0"] = c.mu0;
  j["delta_s"] = c.delta_s;
  j["Delta"] = c.Delta;
  j["certified_sup_v"] = c.certified_sup_v;
  j["g_delta_zero"] = c.g_delta_zero;
  j["u_min_inner"] = c.u_min_inner;
  j["sound"] = c.sound;
  if (!c.failure.empty()) j["failure"] = c.failure;
  j["chain"] = nlohmann::ordered_json::array();
  for (const auto& r : c.chain) j["chain"].push_back(nlohmann::ordered_json::parse(report_to_json(r)));
  return j.dump(2);
}

HarnackCertificate weak_harnack(const GridField& u, const RoughCoefficients& coeffs,
                                double eta, double delta_s_in, double Delta_in,
                                const Exponents& exps, const HarnackOptions& opts) {
  const Grid& g = u.grid;
  const PhasePoint base{g.t_max, {0.0, 0.0}, {0.0, 0.0}};
  HarnackCertificate cert;

  // nonnegative supersolution
  double umin = u.data[0];
  for (double x : u.data) umin = std::min(umin, x);
  if (umin < -opts.tol) {
    cert.failure = "u is not nonnegative";
    return cert;
  }
  {
    const WeakResidual wr = certify_sign(coeffs, u, opts.dict_size, 1e-6);
    if (wr.worst_neg < -1e-6) {
      cert.failure = "u is not a certified supersolution";
      return cert;
    }
  }

  // measure condition on E = {u >= 1} cap C_{1,1} cap {t <= -2/3}
  const Cylinder c11{base, 1.0, 1.0, DriftKind::Kinetic, g.dim};
  const RegionWeights regE = cylinder_weights(g, c11, base.t - 2.0 / 3.0);
  GridField E(g);
  for (std::size_t i = 0; i < E.data.size(); ++i)
    E.data[i] = (u.data[i] >= 1.0 && regE.w[i] > 0.0) ? 1.0 : 0.0;
  double e_measure = 0.0;
  {
    const double cell = g.cell_volume() * g.dt();
    for (std::size_t i = 0; i < E.data.size(); ++i)
      if (E.data[i] > 0.0) e_measure += regE.w[i] * cell;
  }
  cert.eta = regE.measure > 0.0 ? e_measure / regE.measure : 0.0;
  if (cert.eta + 1e-12 < eta) {
    cert.failure = "measure condition |E| >= eta |C_{1,1} cap {t<=-2/3}| fails";
    return cert;
  }

  // coefficient smallness and the weak-Harnack scale R
  const Cylinder c_half{base, 0.5, 2.0, DriftKind::Kinetic, g.dim};
  const RegionWeights w_half = cylinder_weights(g, c_half);
  {
    GridField lam = lambda_field(g, coeffs);
    double ds = lp_norm(lam, w_half, exps.q_lambda);
    if (!coeffs.c.empty()) ds += lp_norm(vector_abs(coeffs.c, g), w_half, exps.q_c);
    cert.delta_s = ds;
  }
  if (cert.delta_s > delta_s_in + 1e-12) {
    cert.failure = "coefficient smallness ||Lambda|| + ||c|| <= delta_S fails on C_{1/2,2}";
    return cert;
  }
  cert.R = std::max(opts.c_r * std::pow(1.0 + delta_s_in, opts.beta_sup), 1.05);
  const SigmaDomains sig = sigma_domains(cert.R, base, g.dim);

  // grid must cover the support of eta_R (transported shell)
  const double need_x = 2.0 * sigma_radius(cert.R);
  const double need_v = sigma_radius(cert.R);
  for (int a = 0; a < g.dim; ++a)
    if (g.x_max[a] < need_x - 1e-9 || g.v_max[a] < need_v - 1e-9) {
      std::ostringstream msg;
      msg << "grid box does not cover Sigma_R: need |x| <= " << need_x << ", |v| <= " << need_v;
      cert.failure = msg.str();
      return cert;
    }

  const RegionWeights w_sig = cylinder_weights(g, sig.sigma);
  {
    GridField lam = lambda_field(g, coeffs);
    double dd = lp_norm(lam, w_sig, exps.q_bar2);
    if (!coeffs.c.empty()) dd += lp_norm(vector_abs(coeffs.c, g), w_sig, exps.q_bar2);
    cert.Delta = dd;
  }
  if (cert.Delta > Delta_in + 1e-12) {
    cert.failure = "coefficient smallness ||Lambda|| + ||c~|| <= Delta fails on Sigma_R";
    return cert;
  }
  {
    // eps_data = ||f - u b||_{q_b} + ||g - u d||_{q_d} over Sigma_R
    GridField fb(g), gd(g);
    const std::int64_t S = g.slice_size();
    for (int n = 0; n <= g.nt; ++n)
      for (std::int64_t j = 0; j < S; ++j) {
        double s2 = 0.0;
        for (int i = 0; i < g.dim; ++i) {
          const double x = coeffs.f_at(n, j, i) - coeffs.b_at(n, j, i) * u.at(n, j);
          s2 += x * x;
        }
        fb.at(n, j) = std::sqrt(s2);
        gd.at(n, j) = coeffs.g_at(n, j) - coeffs.d_at(n, j) * u.at(n, j);
      }
    cert.eps_data = lp_norm(fb, w_sig, exps.q_b) + lp_norm(gd, w_sig, exps.q_d);
  }

  // dual problem, solved once (E does not depend on delta)
  const DualProblem dual = solve_dual(g, E, base);
  cert.mu0 = min_over(dual.w, w_half);
  if (!(cert.mu0 > 0.0)) {
    cert.failure = "dual solution not strictly positive on C_{1/2,2}";
    return cert;
  }

  const Cylinder inner{base, 1.0 / 3.0, 1.0, DriftKind::Kinetic, g.dim};
  const RegionWeights w_inner = cylinder_weights(g, inner);
  cert.u_min_inner = min_over(u, w_inner);

  // delta-shrinking loop
  for (int jj = 1; jj <= opts.delta_max_j; ++jj) {
    const double delta = std::pow(2.0, -jj);
    const double g0 = log_transform_at_zero({delta});
    ComposeResult cr = compose_transform(coeffs, u, Transform::log_reg(delta), true);

    EstimateReport l1 = l1_gain(cr, sig, g0, opts.evo_rtol);
    l1.extra("delta", delta);
    EstimateReport dg = dual_gain(cr, dual, sig, exps, cert.mu0, g0, E);
    dg.extra("delta", delta);

    SupremumBound sup = supremum_bound(cr.v, cr.new_coeffs, inner, c_half, exps, opts.sup);
    EstimateReport sup_rep;
    sup_rep.name = "sup_control";
    sup_rep.lhs = sup.sup_estimate * sup.sup_estimate - 0.25 * g0 * g0;
    sup_rep.rhs =
        std::pow(1.0 + delta_s_in, 2.0 * opts.beta_sup) * std::pow(1.0 + Delta_in, 2.0) *
        (g0 + 1.0 + Delta_in * Delta_in +
         std::pow(cert.eps_data / delta, 2.0) + std::pow(cert.eps_data / delta, 4.0));
    sup_rep.ratio = sup_rep.rhs > 0.0 ? sup_rep.lhs / sup_rep.rhs : 0.0;
    sup_rep.extra("delta", delta);
    sup_rep.extra("certified", sup.certified ? 1.0 : 0.0);
    sup_rep.extra("sup_estimate", sup.sup_estimate);
    sup_rep.extra("d_star", sup.d_star);
    sup_rep.extra("N", sup.N);
    sup_rep.extra("g_delta_zero", g0);
    sup_rep.passed = sup.certified;

    cert.chain.push_back(l1);
    cert.chain.push_back(dg);
    cert.chain.push_back(sup_rep);

    if (!l1.passed || !dg.passed || !sup.certified) continue;

    if (sup.sup_estimate <= 0.75 * g0) {
      cert.delta = delta;
      cert.g_delta_zero = g0;
      cert.certified_sup_v = sup.sup_estimate;
      cert.mu = log_transform_inverse({delta}, std::min(0.75 * g0, sup.sup_estimate));
      cert.passed = true;
      break;
    }
  }

  if (!cert.passed && cert.failure.empty())
    cert.failure = "no delta in the sweep closed the sup-control inequality";
  cert.sound = !cert.passed || cert.mu <= cert.u_min_inner + opts.tol;
  if (cert.passed && !cert.sound) {
    cert.passed = false;
    cert.failure = "certificate unsound: mu exceeds the grid minimum on C_{1/3,1}";
  }
  return cert;
}

} // namespace hypoharnack
