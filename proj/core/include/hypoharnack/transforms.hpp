#pragma once

namespace hypoharnack {

/// Mollified truncation K_{eps,h} = rho_eps * (z-h)_+ with the polynomial bump
/// rho(z) = (15/16)(1-z^2)^2 on [-1,1]; K, K', K'' have closed forms.
/// eps == 0 degenerates to the sharp truncation (z-h)_+.
struct SmoothedTruncation {
  double eps = 0.0;
  double h = 0.0;
};

struct TruncationValue {
  double K = 0.0;
  double dK = 0.0;  // in [0,1]
  double ddK = 0.0; // = rho_eps(z-h) >= 0
};

double mollifier_rho(double s);
TruncationValue truncation_eval(const SmoothedTruncation& T, double z);

/// Regularised log transform G_delta(z) = G((z+delta)/(1+delta)) with
/// G(z) = (-log z + z - 1) 1_{z<=1}. G' <= 0, G'' >= 0 and G'' >= (G')^2.
struct LogTransform {
  double delta = 0.1;
};

struct LogValue {
  double G = 0.0;
  double dG = 0.0;
  double ddG = 0.0;
};

/// Throws std::invalid_argument for z < 0 or delta outside (0,1).
LogValue log_transform_eval(const LogTransform& L, double z);
double log_transform_at_zero(const LogTransform& L);
/// Unique mu in [0,1] with G_delta(mu) = target (target in [0, G_delta(0)]);
/// bisection, 60 iterations.
double log_transform_inverse(const LogTransform& L, double target);

/// C^2 transform Phi used in the composition lemma. All supported transforms
/// are convex; truncation/square-plus are nondecreasing, log is nonincreasing.
class Transform {
public:
  enum class Kind { Identity, Truncation, Log, SquarePlus };

  static Transform identity();
  static Transform truncation(double eps, double h);
  static Transform log_reg(double delta);
  /// Smoothed z^2 1_{z>0}: Phi = K_{eps,0}(z)^2.
  static Transform square_plus(double eps);

  double phi(double z) const;
  double dphi(double z) const;
  double ddphi(double z) const;
  /// Chord slope of dphi between a and b; equals a mean of ddphi on [a,b]
  /// and is the exact discrete second-derivative object of the chain rule.
  double dphi_chord(double a, double b) const;

  bool nondecreasing() const { return kind_ != Kind::Log; }
  Kind kind() const { return kind_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

private:
  Kind kind_ = Kind::Identity;
  double p1_ = 0.0, p2_ = 0.0;
};

} // namespace hypoharnack
