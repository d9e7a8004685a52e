#include "doctest.h"

#include <cmath>

#include "gadi/oracle.hpp"
#include "gadi/scattering.hpp"
#include "gadi/spherical_bessel.hpp"

using namespace gadi;

namespace {

Medium homogeneous(double eps, double kappa, double c = 1.0) {
  return Medium(1.0, eps, kappa, 0.1, SmoothProfile::constant(c, 1.0), FluctuationModel::none());
}

Medium smooth_random(double eps, double kappa) {
  return Medium(1.0, eps, kappa, 0.2,
                SmoothProfile::sampled({0.2, 0.5, 0.8, 1.0}, {1.4, 1.25, 1.1, 1.0}),
                FluctuationModel::random(0.15, 1.0, 0.3, 0.9, 4));
}

}  // namespace

TEST_CASE("spherical Bessel functions against the standard library") {
  for (int l = 0; l <= 12; ++l) {
    for (double x : {1e-4, 0.01, 0.3, 1.0, 2.5, 7.0, 13.0, 40.0, 150.0}) {
      const BesselValue v = spherical_bessel_j(l, x);
      const double ref = std::sph_bessel(l, x);
      CHECK(std::abs(v.j - ref) <= 1e-12 * std::max(std::abs(ref), 1e-3 / std::max(1.0, x)) + 1e-300);
      // derivative against the recurrence in the library functions
      const double dref = l == 0 ? -std::sph_bessel(1, x)
                                 : std::sph_bessel(l - 1, x) - (l + 1.0) / x * ref;
      CHECK(std::abs(v.dj - dref) <= 1e-10 * std::max(std::abs(dref), 1e-3 / std::max(1.0, x)) + 1e-300);
    }
  }
  CHECK(spherical_bessel_j(0, 0.0).j == 1.0);
  CHECK(spherical_bessel_j(3, 0.0).j == 0.0);
  CHECK_THROWS_AS(spherical_bessel_j(1, -1.0), DomainError);
}

TEST_CASE("homogeneous sphere matches the closed-form Bessel solution") {
  const double eps = 0.02;
  for (double kappa : {0.0, 0.3, 1.7}) {
    const Medium m = homogeneous(eps, kappa, 1.2);
    for (int l : {0, 1, 4}) {
      for (double w : {1.13, 2.71}) {
        for (double rs : {0.6, 0.93, 1.0}) {
          const double k = w / (eps * 1.2);
          // u_out = A j_l + B y_l with u_out(1) = 1, u_out'(1) = 1 + i kappa w / eps
          const double j = std::sph_bessel(l, k), y = std::sph_neumann(l, k);
          const double dj = l == 0 ? -std::sph_bessel(1, k) : std::sph_bessel(l - 1, k) - (l + 1.0) / k * j;
          const double dy = l == 0 ? -std::sph_neumann(1, k) : std::sph_neumann(l - 1, k) - (l + 1.0) / k * y;
          const Complex d = 1.0 + kI * kappa * w / eps;
          Eigen::Matrix2cd sys;
          sys << j, y, k * dj, k * dy;
          const Eigen::Vector2cd ab = sys.partialPivLu().solve(Eigen::Vector2cd(1.0, d));
          // with u_in = j_l(k r): W = r^2 (u_in u_out' - u_in' u_out) = B / k
          const Complex expected = std::sph_bessel(l, k * rs) / (ab[1] / k);
          const Complex got = direct_surface_response(m, rs, w, l);
          CHECK(std::abs(got - expected) <= 1e-8 * std::abs(expected));
        }
      }
    }
  }
}

TEST_CASE("oracle self-consistency and boundary residuals") {
  const Medium m = smooth_random(0.01, 0.4);
  for (double w : {1.5, 2.5}) {
    OracleOptions coarse;
    OracleOptions fine;
    fine.steps_per_wavelength = 2.0 * coarse.steps_per_wavelength;
    const Complex a = direct_surface_response(m, 1.0, w, 2, coarse);
    const Complex b = direct_surface_response(m, 1.0, w, 2, fine);
    CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
    // linear in the source amplitude
    CHECK(std::abs(3.5 * a - 3.5 * direct_surface_response(m, 1.0, w, 2, coarse)) == 0.0);

    const RadialSolve s = solve_radial(m, 0.8, w, 2);
    CHECK(s.surface_residual < 1e-8);
    CHECK(s.center_residual < 1e-8);
    CHECK(std::abs(s.surface_value - direct_surface_response(m, 0.8, w, 2)) < 1e-12 * std::abs(s.surface_value));
  }
}

TEST_CASE("energy flux through interior spheres") {
  // lossless: the standing wave carries no flux anywhere
  const RadialSolve lossless = solve_radial(smooth_random(0.02, 0.0), 0.7, 1.91, 1);
  double scale = 0.0;
  for (std::size_t i = 0; i < lossless.r.size(); ++i)
    scale = std::max(scale, std::abs(lossless.p[i] * lossless.r2_dp[i]));
  for (std::size_t i = 0; i < lossless.r.size(); ++i)
    CHECK(std::abs(std::imag(std::conj(lossless.p[i]) * lossless.r2_dp[i])) <= 1e-12 * scale);

  // dissipative surface: constant flux between source and surface equal to the loss
  const double eps = 0.02, kappa = 0.6, w = 1.91;
  const RadialSolve s = solve_radial(smooth_random(eps, kappa), 0.7, w, 1);
  const double loss = std::norm(s.surface_value) * kappa * w / eps;
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    const double flux = std::imag(std::conj(s.p[i]) * s.r2_dp[i]);
    if (s.r[i] > 0.7) CHECK(flux == doctest::Approx(loss).epsilon(1e-8));
    if (s.r[i] < 0.7) CHECK(std::abs(flux) <= 1e-8 * loss);
  }
}

TEST_CASE("WKB response converges at first order in eps") {
  std::vector<double> omegas;
  for (int k = 0; k < 20; ++k) omegas.push_back(2.0 + k / 19.0);
  const MediumFactory flat = [](double eps) { return homogeneous(eps, 0.5); };
  const WkbErrorReport rep = wkb_error_report(flat, omegas, {0, 1, 2}, {0.04, 0.02, 0.01});
  CHECK(rep.rows.size() == 3 * 20 * 3);
  CHECK(rep.fitted_order == doctest::Approx(1.0).epsilon(0.3));
  for (std::size_t e = 1; e < 3; ++e) CHECK(rep.aggregate_error[e] < 0.6 * rep.aggregate_error[e - 1]);

  const WkbErrorReport again = wkb_error_report(flat, omegas, {0, 1, 2}, {0.04, 0.02, 0.01}, 2);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) CHECK(again.rows[i].rel_error == rep.rows[i].rel_error);

  const MediumFactory rough = [](double eps) { return smooth_random(eps, 0.5); };
  CHECK(wkb_error_report(rough, omegas, {1}, {0.04, 0.02, 0.01}).fitted_order >= 0.7);
}

TEST_CASE("WKB error falls as omega grows at fixed eps") {
  // Correction terms scale like eps / omega, so the error shrinks along a
  // frequency sweep rather than accumulating with the phase omega tau.
  const Medium m = homogeneous(0.02, 0.5);
  double prev = 1e9;
  for (double lo : {0.6, 1.2, 2.4, 4.8}) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double w = lo * (1.0 + 0.5 * k / 19.0);
      const Complex exact = direct_surface_response(m, 1.0, w, 1);
      num += std::norm(response_per_unit_source(m, w, reflection_fundamental(m, w, 1)) - exact);
      den += std::norm(exact);
    }
    const double err = std::sqrt(num / den);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("lossless eigenfrequencies") {
  double prev_gap = 0.0;
  for (double eps : {0.02, 0.01}) {
    const Medium m = homogeneous(eps, 0.0);
    const auto roots = direct_eigenfrequencies(m, 1, 1.0, 1.65);
    REQUIRE(roots.size() >= 10);
    double gap = 0.0;
    for (double r : roots) {
      const double n = std::round(r / (kPi * eps));
      gap = std::max(gap, std::abs(r - n * kPi * eps));
    }
    CHECK(gap < 4.0 * eps * eps);
    if (prev_gap > 0.0) CHECK(gap < 0.5 * prev_gap);
    prev_gap = gap;
    for (std::size_t i = 1; i < roots.size(); ++i) CHECK(roots[i] > roots[i - 1]);
  }
  // window strictly between two roots
  const Medium m = homogeneous(0.02, 0.0);
  const auto roots = direct_eigenfrequencies(m, 1, 1.0, 1.3);
  CHECK(direct_eigenfrequencies(m, 1, roots[2] + 1e-3, roots[3] - 1e-3).empty());
  CHECK_THROWS_AS(direct_eigenfrequencies(homogeneous(0.02, 0.1), 1, 1.0, 1.3), ConfigError);
}
