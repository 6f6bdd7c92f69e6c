#include "hypoharnack/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace hypoharnack {

double mollifier_rho(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return (15.0 / 16.0) * w * w;
}

namespace {
// P(chi) = int_{-1}^{chi} rho,  Q(chi) = int_{-1}^{chi} s rho(s) ds
inline double rho_cdf(double chi) {
  return (15.0 / 16.0) * (chi - 2.0 * chi * chi * chi / 3.0 + std::pow(chi, 5) / 5.0) + 0.5;
}
inline double rho_first_moment(double chi) {
  const double c2 = chi * chi;
  return (15.0 / 16.0) * (c2 / 2.0 - c2 * c2 / 2.0 + c2 * c2 * c2 / 6.0 - 1.0 / 6.0);
}
} // namespace

TruncationValue truncation_eval(const SmoothedTruncation& T, double z) {
  TruncationValue out;
  if (T.eps < 0.0) throw std::invalid_argument("truncation_eval: eps must be >= 0");
  if (T.eps == 0.0) {
    if (z > T.h) {
      out.K = z - T.h;
      out.dK = 1.0;
    }
    return out;
  }
  const double chi = (z - T.h) / T.eps;
  if (chi <= -1.0) return out;
  if (chi >= 1.0) {
    out.K = z - T.h; // rho has zero first moment, so K is exactly affine here
    out.dK = 1.0;
    return out;
  }
  out.K = T.eps * (chi * rho_cdf(chi) - rho_first_moment(chi));
  out.dK = rho_cdf(chi);
  out.ddK = mollifier_rho(chi) / T.eps;
  return out;
}

LogValue log_transform_eval(const LogTransform& L, double z) {
  if (!(L.delta > 0.0 && L.delta < 1.0))
    throw std::invalid_argument("log_transform_eval: delta must be in (0,1)");
  if (z < 0.0) throw std::invalid_argument("log_transform_eval: z must be >= 0");
  LogValue out;
  const double y = (z + L.delta) / (1.0 + L.delta);
  if (y >= 1.0) return out;
  const double scale = 1.0 / (1.0 + L.delta);
  out.G = -std::log(y) + y - 1.0;
  out.dG = (1.0 - 1.0 / y) * scale;
  out.ddG = scale * scale / (y * y);
  return out;
}

double log_transform_at_zero(const LogTransform& L) { return log_transform_eval(L, 0.0).G; }

double log_transform_inverse(const LogTransform& L, double target) {
  const double g0 = log_transform_at_zero(L);
  if (target >= g0) return 0.0;
  if (target <= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0; // G_delta strictly decreasing on [0,1]
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_transform_eval(L, mid).G > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Transform Transform::identity() { return Transform{}; }

Transform Transform::truncation(double eps, double h) {
  Transform t;
  t.kind_ = Kind::Truncation;
  t.p1_ = eps;
  t.p2_ = h;
  return t;
}

Transform Transform::log_reg(double delta) {
  Transform t;
  t.kind_ = Kind::Log;
  t.p1_ = delta;
  return t;
}

Transform Transform::square_plus(double eps) {
  Transform t;
  t.kind_ = Kind::SquarePlus;
  t.p1_ = eps;
  return t;
}

double Transform::phi(double z) const {
  switch (kind_) {
    case Kind::Identity:
      return z;
    case Kind::Truncation:
      return truncation_eval({p1_, p2_}, z).K;
    case Kind::Log:
      return log_transform_eval({p1_}, z).G;
    case Kind::SquarePlus: {
      const double k = truncation_eval({p1_, 0.0}, z).K;
      return k * k;
    }
  }
  return 0.0;
}

double Transform::dphi(double z) const {
  switch (kind_) {
    case Kind::Identity:
      return 1.0;
    case Kind::Truncation:
      return truncation_eval({p1_, p2_}, z).dK;
    case Kind::Log:
      return log_transform_eval({p1_}, z).dG;
    case Kind::SquarePlus: {
      const auto t = truncation_eval({p1_, 0.0}, z);
      return 2.0 * t.K * t.dK;
    }
  }
  return 0.0;
}

double Transform::ddphi(double z) const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Truncation:
      return truncation_eval({p1_, p2_}, z).ddK;
    case Kind::Log:
      return log_transform_eval({p1_}, z).ddG;
    case Kind::SquarePlus: {
      const auto t = truncation_eval({p1_, 0.0}, z);
      return 2.0 * (t.dK * t.dK + t.K * t.ddK);
    }
  }
  return 0.0;
}

double Transform::dphi_chord(double a, double b) const {
  const double scale = std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
  if (std::fabs(b - a) < 1e-9 * scale) return ddphi(0.5 * (a + b));
  return (dphi(b) - dphi(a)) / (b - a);
}

} // namespace hypoharnack
