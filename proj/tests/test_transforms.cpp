#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "hypoharnack/transforms.hpp"

using namespace hypoharnack;

TEST_CASE("truncation closed forms: outside support, affine regime, mollifier peak") {
  const SmoothedTruncation T{0.25, 1.0};
  // z = h - 2 eps: everything vanishes
  auto lo = truncation_eval(T, 0.5);
  CHECK(lo.K == 0.0);
  CHECK(lo.dK == 0.0);
  CHECK(lo.ddK == 0.0);
  // z = h + 2 eps: exactly affine (rho has zero first moment)
  auto hi = truncation_eval(T, 1.5);
  CHECK(hi.K == doctest::Approx(0.5));
  CHECK(hi.dK == 1.0);
  CHECK(hi.ddK == 0.0);
  // z = h: K'' = rho(0)/eps = (15/16)/eps
  auto mid = truncation_eval(T, 1.0);
  CHECK(mid.ddK == doctest::Approx((15.0 / 16.0) / T.eps));
  CHECK(mid.dK == doctest::Approx(0.5)); // symmetric mollifier
}

TEST_CASE("truncation: |K - (z-h)_+| <= eps, K' in [0,1], K'' >= 0, Jensen bound") {
  const SmoothedTruncation T{0.1, 0.3};
  for (int i = 0; i < 10000; ++i) {
    const double z = -1.0 + 3.0 * i / 10000.0;
    const auto t = truncation_eval(T, z);
    const double plus = std::max(z - T.h, 0.0);
    CHECK(std::fabs(t.K - plus) <= T.eps);
    CHECK(t.dK >= 0.0);
    CHECK(t.dK <= 1.0);
    CHECK(t.ddK >= 0.0);
    CHECK(t.K >= plus - 1e-15); // K >= (z-h)_+ for the symmetric mollifier
    // K'' supported in |z - h| <= eps
    if (std::fabs(z - T.h) > T.eps) CHECK(t.ddK == 0.0);
  }
  // convolution oracle: quadrature of rho_eps * (z-h)_+ matches the closed form
  const int nq = 20000;
  for (double z : {0.25, 0.3, 0.34, 0.4}) {
    double acc = 0.0;
    for (int i = 0; i < nq; ++i) {
      const double s = -1.0 + 2.0 * (i + 0.5) / nq;
      acc += mollifier_rho(s) * std::max(z - T.eps * s - T.h, 0.0) * (2.0 / nq);
    }
    CHECK(truncation_eval(T, z).K == doctest::Approx(acc).epsilon(1e-6));
  }
}

TEST_CASE("truncation sharp limit eps = 0") {
  const SmoothedTruncation T{0.0, 0.5};
  CHECK(truncation_eval(T, 0.4).K == 0.0);
  CHECK(truncation_eval(T, 0.9).K == doctest::Approx(0.4));
  CHECK(truncation_eval(T, 0.9).dK == 1.0);
}

TEST_CASE("log transform closed forms and the magic identity") {
  const LogTransform L{0.1};
  // z >= 1: the shifted argument passes 1, so everything vanishes
  auto hi = log_transform_eval(L, 1.0);
  CHECK(hi.G == 0.0);
  CHECK(hi.dG == 0.0);
  CHECK(hi.ddG == 0.0);
  // G_delta(0) = -log(1/11) + 1/11 - 1
  CHECK(log_transform_at_zero(L) ==
        doctest::Approx(-std::log(1.0 / 11.0) + 1.0 / 11.0 - 1.0).epsilon(1e-12));
  CHECK(log_transform_at_zero(L) == doctest::Approx(1.4890).epsilon(1e-3));
  CHECK_THROWS_AS(log_transform_eval(L, -0.1), std::invalid_argument);

  // G'' - (G')^2 = 2/z - 1 >= 0 on (0, 1], exactly in floating point
  for (int i = 1; i <= 10000; ++i) {
    const double z = static_cast<double>(i) / 10000.0;
    // raw G (delta-free): G'' = 1/z^2, G' = 1 - 1/z
    const double gpp = 1.0 / (z * z);
    const double gp = 1.0 - 1.0 / z;
    const double lhs = gpp - gp * gp;
    const double rhs = 2.0 / z - 1.0;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(rhs >= 0.0);
  }
}

TEST_CASE("log transform trivial bound and inverse") {
  const LogTransform L{0.05};
  const double g0 = log_transform_at_zero(L);
  for (int i = 0; i <= 1000; ++i) {
    const double z = 3.0 * i / 1000.0;
    const double v = log_transform_eval(L, z).G;
    CHECK(v >= 0.0);
    CHECK(v <= g0 + 1e-15);
  }
  // G_delta(0) -> infinity as delta -> 0
  CHECK(log_transform_at_zero({0.01}) > log_transform_at_zero({0.1}));

  // inverse: unique root, 60-step bisection
  const double target = 0.75 * g0;
  const double mu = log_transform_inverse(L, target);
  CHECK(mu > 0.0);
  CHECK(mu < 1.0);
  CHECK(log_transform_eval(L, mu).G == doctest::Approx(target).epsilon(1e-10));
  CHECK(log_transform_inverse(L, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("transform wrapper: derivative consistency and chords") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  const Transform ts[] = {Transform::truncation(0.2, 0.7), Transform::log_reg(0.1),
                          Transform::square_plus(0.15), Transform::identity()};
  for (const auto& t : ts) {
    for (int i = 0; i < 500; ++i) {
      const double z = u(rng);
      const double fd = (t.phi(z + 1e-6) - t.phi(z - 1e-6)) / 2e-6;
      CHECK(t.dphi(z) == doctest::Approx(fd).epsilon(1e-4));
      CHECK(t.ddphi(z) >= -1e-12); // all supported transforms are convex
      const double b = u(rng);
      const double chord = t.dphi_chord(z, b);
      if (std::fabs(b - z) > 1e-6)
        CHECK(chord == doctest::Approx((t.dphi(b) - t.dphi(z)) / (b - z)));
      CHECK(chord >= -1e-12); // mean of ddphi
    }
  }
  CHECK(Transform::log_reg(0.1).nondecreasing() == false);
  CHECK(Transform::truncation(0.1, 0.0).nondecreasing() == true);
}
