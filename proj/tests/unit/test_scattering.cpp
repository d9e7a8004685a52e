#include "doctest.h"

#include <cmath>

#include "gadi/scattering.hpp"

using namespace gadi;

namespace {

Medium homogeneous(double eps, double kappa, double c = 1.0) {
  return Medium(1.0, eps, kappa, 0.1, SmoothProfile::constant(c, 1.0), FluctuationModel::none());
}

Medium random_medium(std::uint64_t seed, double kappa = 0.3) {
  return Medium(1.0, 0.01, kappa, 0.1,
                SmoothProfile::piecewise_constant({{0.0, 0.5, 1.2}, {0.5, 1.0, 1.0}}),
                FluctuationModel::random(0.12, 1.0, 0.2, 0.97, seed));
}

SourceTrace unit_source(double eps, int l_max = 4, double shift = 0.0) {
  HarmonicTable g(l_max);
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) g(l, m) = Complex(1.0 + 0.1 * l, 0.05 * m);
  return SourceTrace(eps, BandSpectrum{1.0, 2.0, 0.4}, g, shift);
}

}  // namespace

TEST_CASE("reflection of a homogeneous sphere is the center phase") {
  const Medium m = homogeneous(0.01, 0.2, 1.3);
  for (double w : {0.9, 1.7, 2.45}) {
    const Complex e = std::polar(1.0, 2.0 * w * travel_time(m, 0.0, 1.0) / 0.01);
    CHECK(std::abs(reflection_fundamental(m, w, 1) - e) < 1e-12);
    CHECK(std::abs(reflection_fundamental(m, w, 3) - e) < 1e-12);
    // even l picks up the parity sign of the regular solution
    CHECK(std::abs(reflection_fundamental(m, w, 2) + e) < 1e-12);
  }
}

TEST_CASE("reflection is unimodular") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Medium m = random_medium(seed);
    for (double w = 1.0; w < 3.0; w += 0.29)
      for (int l : {0, 1, 2}) CHECK(std::abs(std::abs(reflection_fundamental(m, w, l)) - 1.0) < 1e-8);
  }
}

TEST_CASE("point source response") {
  const double eps = 0.01;
  // kappa c_o = 1 gives Gamma = 0
  const Medium m = random_medium(9, 1.0);
  CHECK(gamma_surface(m) == doctest::Approx(0.0));
  const SourceTrace src = unit_source(eps);
  for (double w : {1.6, 2.3}) {
    const Complex r = reflection_fundamental(m, w, 2);
    const Complex f = src.coefficient(w, 2, 1);
    const Complex expected = -kI * eps * 1.0 / (2.0 * w) * f * (1.0 + r);
    CHECK(std::abs(point_source_response(m, src, w, 2, 1) - expected) < 1e-14 * std::abs(expected) + 1e-300);
    // Gamma = 0 also simplifies the symmetrized response
    const Complex sym = -kI * eps / (2.0 * w) * f * std::norm(1.0 + r);
    CHECK(std::abs(symmetrized_response(m, src, w, 2, 1) - sym) < 1e-13 * std::abs(sym));
  }
  // outside the source band the response vanishes
  const SourceTrace banded(eps, BandSpectrum{1.0, 2.0, 0.4, 1.5, 2.5}, HarmonicTable(1));
  CHECK(point_source_response(m, banded, 1.2, 1, 0) == Complex(0.0));
  CHECK(point_source_response(m, banded, 2.7, 1, 0) == Complex(0.0));
}

TEST_CASE("symmetrized response equals p - conj(p) per unit source") {
  const double eps = 0.01;
  for (double kappa : {0.1, 0.7, 2.5}) {
    const Medium m = random_medium(21, kappa);
    const SourceTrace src = unit_source(eps);
    for (double w = 1.2; w < 2.9; w += 0.13) {
      const Complex f = src.coefficient(w, 3, -2);
      const Complex h = point_source_response(m, src, w, 3, -2) / f;
      const Complex lhs = symmetrized_response(m, src, w, 3, -2);
      const Complex rhs = f * (h - std::conj(h));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
    }
  }
  const Medium lossless = random_medium(21, 0.0);
  CHECK(symmetrized_response(lossless, unit_source(eps), 1.77, 1, 0) == Complex(0.0));
  CHECK_THROWS_AS(symmetrized_response(lossless, unit_source(eps, 4, 0.3), 1.77, 1, 0), ContractError);
}

TEST_CASE("scattering operator limits") {
  CHECK(scattering_value(0.4, Complex(-1.0, 0.0), 1.0) == 0.0);
  for (double kc : {0.05, 0.02, 0.005}) {
    const double g = (1.0 - kc) / (1.0 + kc);
    const double lim = (1.0 - g * g) * scattering_value(g, Complex(1.0), 1.0);
    CHECK(lim == doctest::Approx(4.0 / kc).epsilon(1e-12));
  }
  const Medium m = random_medium(5);
  for (double w : {1.1, 2.2}) CHECK(scattering_operator(m, w, 1) >= 0.0);

  // kappa = 0 at an exact eigenfrequency of the homogeneous sphere
  const Medium lossless = homogeneous(0.01, 0.0);
  CHECK_THROWS_AS(scattering_operator(lossless, 100 * kPi * 0.01, 1), ResonanceError);
  CHECK_THROWS_AS(point_source_response(lossless, unit_source(0.01), 60 * kPi * 0.01, 1, 0),
                  ResonanceError);
}

TEST_CASE("source factors reduce to 1 and R at the surface") {
  const Medium m = random_medium(17);
  const FrequencyGrid grid(1.3, 0.21, 6);
  const ScatteringSpectrum s = compute_spectrum(m, grid, 2, {0.5, 1.0, 0.9});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(s.s_hat[k][1] == Complex(1.0));
    CHECK(s.t_hat[k][1] == s.reflection[k]);
    CHECK(s.max_energy_residual[k] < 1e-8);
    CHECK(std::abs(s.reflection[k] - reflection_fundamental(m, grid[k], 2)) < 1e-7);
  }
  // threads do not change results
  const ScatteringSpectrum t = compute_spectrum(m, grid, 2, {0.5, 1.0, 0.9}, {}, 3);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(t.reflection[k] == s.reflection[k]);
    CHECK(t.s_hat[k][0] == s.s_hat[k][0]);
  }
  CHECK_THROWS_AS(compute_spectrum(m, FrequencyGrid(), 1), ConfigError);
}

TEST_CASE("homogeneous sphere peaks sit at n pi eps c / R_o") {
  const double eps = 0.01;
  const double d_omega = 5e-5;
  const FrequencyGrid grid = FrequencyGrid::covering(1.0, 1.2, d_omega);
  const Medium m = homogeneous(eps, 0.02);
  const auto peaks = eigenfrequency_scan(m, grid, 1);
  REQUIRE(peaks.size() >= 6);
  const auto narrow = eigenfrequency_scan(homogeneous(eps, 0.01), grid, 1);
  REQUIRE(narrow.size() == peaks.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const double n = std::round(peaks[i].omega / (kPi * eps));
    CHECK(std::abs(peaks[i].omega - n * kPi * eps) <= 0.5 * d_omega);
    CHECK_FALSE(peaks[i].divergent);
    CHECK(std::abs(narrow[i].omega - peaks[i].omega) <= 0.5 * d_omega);
    CHECK(narrow[i].width < peaks[i].width);
    CHECK(narrow[i].value > peaks[i].value);
  }
  // lossless scans flag their peaks as poles
  const auto poles = eigenfrequency_scan(homogeneous(eps, 0.0), FrequencyGrid(1.0, 3.3e-4, 300), 1);
  REQUIRE_FALSE(poles.empty());
  for (const auto& p : poles) CHECK(p.divergent);
}

TEST_CASE("pulse samples are consistent with the spectrum") {
  const double eps = 0.02;
  const SourceTrace src = unit_source(eps);
  for (double t : {0.003, 0.01, 0.05}) CHECK(src.sample(t) == doctest::Approx(src.sample(-t)).epsilon(1e-12));
  // forward transform of the samples by the trapezoid rule
  const double dt = 0.0005;
  for (double w : {1.5, 2.0, 2.6}) {
    Complex acc = 0.0;
    for (int j = -800; j <= 800; ++j) {
      const double t = j * dt;
      acc += src.sample(t) * std::polar(1.0, w * t / eps);
    }
    acc *= dt / eps;
    CHECK(std::abs(acc - src.transform(w)) < 1e-8);
  }
  const SourceTrace shifted = unit_source(eps, 4, 0.1);
  CHECK_FALSE(shifted.is_even());
  CHECK(shifted.sample(0.1 + 0.004) == doctest::Approx(shifted.sample(0.1 - 0.004)));
}
