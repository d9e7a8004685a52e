#include "doctest.h"

#include <cmath>
#include <random>

#include "gadi/harmonics.hpp"

using namespace gadi;

TEST_CASE("associated Legendre values") {
  CHECK(associated_legendre(0, 0, 0.3) == 1.0);
  CHECK(associated_legendre(1, 0, 0.5) == doctest::Approx(0.5));
  CHECK(associated_legendre(2, 0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(associated_legendre(2, 0, 1.1), DomainError);
  CHECK_THROWS_AS(associated_legendre(1, 2, 0.1), DomainError);
  // Closed forms with the Condon-Shortley phase.
  for (double x : {-0.9, -0.2, 0.0, 0.4, 0.95}) {
    const double s = std::sqrt(1.0 - x * x);
    CHECK(associated_legendre(1, 1, x) == doctest::Approx(-s));
    CHECK(associated_legendre(2, 1, x) == doctest::Approx(-3.0 * x * s));
    CHECK(associated_legendre(2, 2, x) == doctest::Approx(3.0 * s * s));
    CHECK(associated_legendre(3, 0, x) == doctest::Approx(0.5 * (5 * x * x * x - 3 * x)));
    CHECK(associated_legendre(3, -2, x) ==
          doctest::Approx(associated_legendre(3, 2, x) / 120.0));
    // standard library oracle (no phase) for m = 0 up to high degree
    for (int l = 0; l <= 12; ++l)
      CHECK(legendre(l, x) == doctest::Approx(std::legendre(l, x)).epsilon(1e-12));
    // std::assoc_legendre omits the Condon-Shortley phase
    for (int l = 1; l <= 8; ++l)
      for (int m = 1; m <= l; ++m)
        CHECK(associated_legendre(l, m, x) ==
              doctest::Approx((m % 2 ? -1.0 : 1.0) * std::assoc_legendre(l, m, x)).epsilon(1e-11));
  }
}

TEST_CASE("spherical harmonic values") {
  const double y00 = 1.0 / std::sqrt(4.0 * kPi);
  CHECK(std::abs(spherical_harmonic(0, 0, 0.7, 2.1) - Complex(y00, 0.0)) < 1e-15);
  const Complex y11 = spherical_harmonic(1, 1, kPi / 2, 0.0);
  CHECK(y11.real() == doctest::Approx(-std::sqrt(3.0 / (8.0 * kPi))));
  CHECK(std::abs(y11.imag()) < 1e-15);
  // conjugation symmetry Y_{l,-m} = (-1)^m conj(Y_{l,m})
  for (int l = 0; l <= 5; ++l)
    for (int m = 1; m <= l; ++m) {
      const Complex lhs = spherical_harmonic(l, -m, 1.1, 0.4);
      const Complex rhs = (m % 2 ? -1.0 : 1.0) * std::conj(spherical_harmonic(l, m, 1.1, 0.4));
      CHECK(std::abs(lhs - rhs) < 1e-14);
    }
  // std::sph_legendre is Y_{l,m}(theta, 0) including the Condon-Shortley phase
  for (int l = 0; l <= 6; ++l)
    for (int m = 0; m <= l; ++m)
      CHECK(spherical_harmonic(l, m, 0.83, 0.0).real() ==
            doctest::Approx(std::sph_legendre(l, m, 0.83)).epsilon(1e-12));
}

TEST_CASE("grid quadrature gives an orthonormal Gram matrix") {
  const int l_max = 6;
  const AngularGrid grid = AngularGrid::for_degree(l_max);
  CHECK(grid.theta_weights().sum() == doctest::Approx(2.0).epsilon(1e-14));
  const int n = ModeIndex::count(l_max);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ModeIndex a = ModeIndex::from_flat(i);
    CHECK(ModeIndex::flat(a.l, a.m) == i);
    for (int j = 0; j < n; ++j) {
      const ModeIndex b = ModeIndex::from_flat(j);
      const Complex g = grid.integrate([&](double th, double ph) {
        return std::conj(spherical_harmonic(a.l, a.m, th, ph)) * spherical_harmonic(b.l, b.m, th, ph);
      });
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-12);

  // the real basis is orthonormal as well
  double worst_real = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ModeIndex a = ModeIndex::from_flat(i);
      const ModeIndex b = ModeIndex::from_flat(j);
      const double g = grid.integrate([&](double th, double ph) {
        return real_spherical_harmonic(a.l, a.m, th, ph) * real_spherical_harmonic(b.l, b.m, th, ph);
      });
      worst_real = std::max(worst_real, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst_real < 1e-12);
}

TEST_CASE("source projection") {
  const int l_max = 4;
  const AngularGrid grid = AngularGrid::for_degree(l_max);
  const HarmonicTable one = project_source([](double, double) { return Complex(1.0); }, l_max, grid);
  CHECK(std::abs(one(0, 0) - std::sqrt(4.0 * kPi)) < 1e-12);
  for (int i = 1; i < ModeIndex::count(l_max); ++i) CHECK(std::abs(one.values[i]) < 1e-10);

  const HarmonicTable y21 =
      project_source([](double th, double ph) { return spherical_harmonic(2, 1, th, ph); }, l_max, grid);
  for (int i = 0; i < ModeIndex::count(l_max); ++i) {
    const double expected = i == ModeIndex::flat(2, 1) ? 1.0 : 0.0;
    CHECK(std::abs(y21.values[i] - expected) < 1e-10);
  }

  CHECK_THROWS_AS(project_source([](double, double) { return Complex(1.0); }, l_max,
                                 AngularGrid(3, 9)),
                  ConfigError);
}

TEST_CASE("narrow cap projects onto conj(Y) at its center") {
  const double th0 = 1.0;
  const double ph0 = 0.7;
  const double x0 = std::sin(th0) * std::cos(ph0);
  const double y0 = std::sin(th0) * std::sin(ph0);
  const double z0 = std::cos(th0);
  const int l_max = 3;
  const AngularGrid fine(160, 321);
  double prev_err = 1e9;
  for (double width : {0.2, 0.1, 0.05}) {
    auto cap = [&](double th, double ph) {
      const double cosg = std::sin(th) * std::cos(ph) * x0 + std::sin(th) * std::sin(ph) * y0 +
                          std::cos(th) * z0;
      return std::exp(-(1.0 - cosg) / (width * width));
    };
    const double mass = fine.integrate(cap);
    const HarmonicTable t =
        project_source([&](double th, double ph) { return Complex(cap(th, ph) / mass); }, l_max, fine);
    double err = 0.0;
    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m)
        err = std::max(err, std::abs(t(l, m) - std::conj(spherical_harmonic(l, m, th0, ph0))));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.02);
}

TEST_CASE("angular weights") {
  const int l_max = 4;
  const AngularGrid grid = AngularGrid::for_degree(l_max + 2);
  const WeightTable ones = angular_weights([](double, double) { return 1.0; }, l_max, grid);
  const WeightTable twos = angular_weights([](double, double) { return 2.0; }, l_max, grid);
  for (int i = 0; i < ModeIndex::count(l_max); ++i) {
    CHECK(ones.values[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(twos.values[i] == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK(ones.degree_sum(3) == doctest::Approx(7.0));

  // A discontinuous density needs a fine grid; |Y_00|^2 over a hemisphere is 1/2.
  const AngularGrid fine(400, 9);
  const WeightTable hemi =
      angular_weights([](double th, double) { return th < kPi / 2 ? 1.0 : 0.0; }, l_max, fine);
  CHECK(hemi(0, 0) == doctest::Approx(0.5));
  // |Y_lm|^2 is even under theta -> pi - theta, so every weight is 1/2
  for (int i = 0; i < ModeIndex::count(l_max); ++i)
    CHECK(hemi.values[i] == doctest::Approx(0.5).epsilon(1e-12));
  // monotone: adding a nonnegative density increases every weight
  const WeightTable more = angular_weights(
      [](double th, double ph) { return 1.0 + 0.5 * std::pow(std::cos(th) * std::sin(ph), 2); }, l_max, grid);
  for (int i = 0; i < ModeIndex::count(l_max); ++i) CHECK(more.values[i] >= ones.values[i]);

  CHECK_THROWS_AS(angular_weights([](double th, double) { return std::cos(th); }, l_max, grid),
                  DomainError);
}

TEST_CASE("Legendre expansion round trip") {
  const QuadratureRule rule = gauss_legendre(12);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
  c[0] = 2.5;
  Eigen::VectorXd samples = legendre_expand(c, rule.nodes);
  for (Eigen::Index i = 0; i < samples.size(); ++i) CHECK(samples[i] == doctest::Approx(2.5));
  CHECK(legendre_project(samples, rule, 0) == doctest::Approx(2.5));

  c.setZero();
  c[3] = 1.0;
  samples = legendre_expand(c, rule.nodes);
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    CHECK(samples[i] == doctest::Approx(std::legendre(3, rule.nodes[i])));
  CHECK(legendre_project(samples, rule, 3) == doctest::Approx(1.0));

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int l_max = 8;
  const QuadratureRule exact = gauss_legendre(l_max + 1);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd coeffs(l_max + 1);
    for (int l = 0; l <= l_max; ++l) coeffs[l] = dist(gen);
    const Eigen::VectorXd back = legendre_project_all(legendre_expand(coeffs, exact.nodes), exact, l_max);
    CHECK(((back - coeffs).array().abs() / coeffs.array().abs()).maxCoeff() < 1e-8);
  }
  CHECK_THROWS_AS(legendre_project(samples, gauss_legendre(3), 4), ConfigError);
}
