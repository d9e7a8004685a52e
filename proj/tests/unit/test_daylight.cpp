#include "doctest.h"

#include <cmath>
#include <numeric>

#include "gadi/daylight.hpp"
#include "gadi/oracle.hpp"

using namespace gadi;

namespace {

Medium layered_random(double eps, std::uint64_t seed, double kappa = 0.3) {
  return Medium(1.0, eps, kappa, 0.1,
                SmoothProfile::piecewise_constant({{0.0, 0.5, 1.2}, {0.5, 1.0, 1.0}}),
                FluctuationModel::random(0.12, 1.0, 0.2, 0.97, seed));
}

NoiseSourceModel band_noise(double lo, double hi, double center = 2.0, double width = 0.3) {
  NoiseSourceModel n;
  n.radial = {lo, hi, 1.0, RadialDensity::Shape::top_hat};
  n.spectrum = BandSpectrum{1.0, center, width};
  return n;
}

// The reflection form assumes |a|^2 - |b|^2 = 1 exactly, so identities between
// the two forms hold to the integrator's energy drift.
Tolerances tight() {
  Tolerances t;
  t.rel_tol = 1e-12;
  t.abs_tol = 1e-15;
  return t;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("explicit solve of the transfer matches the reflection form") {
  const Medium m = layered_random(0.01, 3);
  for (int l : {0, 1, 2, 3})
    for (double rs : {0.35, 0.62, 0.9, 0.999})
      for (double w : {1.4, 2.2}) {
        const auto props = integrate_checkpoints(m, w, m.core_radius(), {rs, 1.0}, tight());
        const Complex r = reflection_from_propagator(props[1], center_phase(m, w), l);
        const SourceFactors f = source_factors(props[0], props[1], center_phase(m, w), l);
        const Complex closed = transfer_from_factors(m, w, rs, f, r);
        const Complex solved = surface_transfer(m, w, l, rs, tight());
        CHECK(std::abs(solved - closed) <= 1e-10 * std::abs(closed));
      }
}

TEST_CASE("transfer at the surface reduces to the point-source response") {
  const Medium m = layered_random(0.01, 5);
  for (int l : {0, 1, 4})
    for (double w : {1.1, 2.6}) {
      const Complex h = surface_transfer(m, w, l, 1.0);
      const Complex p = response_per_unit_source(m, w, reflection_fundamental(m, w, l));
      CHECK(std::abs(h - p) <= 1e-9 * std::abs(p));
    }
}

TEST_CASE("autocorrelation closed form equals the integral of |H|^2") {
  const Medium m = layered_random(0.01, 7);
  const NoiseSourceModel noise = band_noise(0.8, 0.95);
  for (int l : {0, 1, 2})
    for (double w : {1.7, 2.0, 2.35}) {
      const double closed = statistical_autocorrelation(m, noise, w, l, tight());
      const double direct = transfer_autocorrelation(m, noise, w, l, tight());
      CHECK(closed > 0.0);
      CHECK(std::abs(closed - direct) <= 1e-10 * direct);
    }
}

TEST_CASE("transfer agrees with the exact radial solve at interior sources") {
  // homogeneous sphere with a layered jump: the exact solve is independent of the WKB reduction
  auto make = [](double eps) {
    return Medium(1.0, eps, 0.4, 0.1, SmoothProfile::sampled({0.0, 0.5, 1.0}, {1.2, 1.1, 1.0}),
                  FluctuationModel::none());
  };
  std::vector<double> eps_list{0.02, 0.01, 0.005};
  std::vector<double> errors;
  for (double eps : eps_list) {
    const Medium m = make(eps);
    double num = 0.0, den = 0.0;
    for (int l : {0, 1, 2})
      for (double rs : {0.6, 0.8, 0.95})
        for (double w : {1.3, 2.1}) {
          const Complex exact = direct_surface_response(m, rs, w, l);
          const Complex wkb = surface_transfer(m, w, l, rs);
          num += std::norm(exact - wkb);
          den += std::norm(exact);
        }
    errors.push_back(std::sqrt(num / den));
  }
  CHECK(errors.back() < 0.03);
  CHECK(loglog_slope(eps_list, errors) > 0.7);
}

TEST_CASE("thin annulus limit") {
  const Medium m = layered_random(0.01, 11);
  const double w = 2.0;
  SUBCASE("statistical value converges linearly in the thickness") {
    std::vector<double> d_list, err;
    for (double d = 4e-4; d > 4e-5; d *= 0.5) {
      NoiseSourceModel noise = band_noise(1.0 - d, 1.0 - 0.01 * d);
      double num = 0.0, den = 0.0;
      for (int l : {0, 1, 3}) {
        const double stat = statistical_autocorrelation(m, noise, w, l);
        const double thin = thin_annulus_autocorrelation(m, noise, w, l);
        num += (stat - thin) * (stat - thin);
        den += thin * thin;
      }
      d_list.push_back(d);
      err.push_back(std::sqrt(num / den));
    }
    // the phase across the annulus is w d / eps, so the error is O(d / eps)
    CHECK(err.back() < 0.02);
    CHECK(loglog_slope(d_list, err) == doctest::Approx(1.0).epsilon(0.2));
  }
  SUBCASE("omega dependence is the 1/w^2 prefactor times F and the operator") {
    NoiseSourceModel noise = band_noise(1.0 - 2e-4, 1.0 - 2e-6);
    const FrequencyGrid grid(1.8, 0.05, 8);
    const auto thin = thin_annulus_spectrum(m, noise, grid, 1);
    const ScatteringSpectrum sc = compute_spectrum(m, grid, 1);
    std::vector<double> ratio;
    for (std::size_t k = 0; k < grid.size(); ++k)
      ratio.push_back(thin[k] * grid[k] * grid[k] / (noise.spectrum(grid[k]) * sc.operator_value[k]));
    for (double r : ratio) CHECK(r == doctest::Approx(ratio[0]).epsilon(1e-10));
  }
  SUBCASE("thickness beyond the wavelength bound is rejected") {
    NoiseSourceModel noise = band_noise(0.99, 1.0);
    CHECK_THROWS_AS(thin_annulus_autocorrelation(m, noise, w, 1), ConfigError);
  }
}

TEST_CASE("source quadrature validation") {
  const Medium m = layered_random(0.01, 2);
  const NoiseSourceModel noise = band_noise(0.5, 0.9);
  const QuadratureRule auto_rule = source_rule(m, noise, 3.0);
  CHECK(auto_rule.weights.sum() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_THROWS_AS(source_rule(m, noise, 3.0, {}, SourceQuadrature{8, 2}), ConfigError);
  CHECK_THROWS_AS(source_rule(m, band_noise(0.05, 0.5), 3.0), ConfigError);
  CHECK_THROWS_AS(source_rule(m, band_noise(0.9, 0.8), 3.0), ConfigError);
}

TEST_CASE("synthesized recordings") {
  const Medium m = layered_random(0.02, 13);
  NoiseSourceModel noise = band_noise(0.85, 0.95, 2.0, 0.2);
  noise.spectrum.band_lo = 1.4;
  noise.spectrum.band_hi = 2.6;
  const SynthesisGrid grid = make_synthesis_grid(0.02, 4.0, 2.6);
  const TransferTable table = build_transfer_table(m, noise, grid, 1);
  REQUIRE(!table.bins.empty());

  SUBCASE("reproducible, seed dependent and real") {
    const auto a = synthesize_recordings(table, 0, 42, 3);
    const auto b = synthesize_recordings(table, 0, 42, 3);
    const auto c = synthesize_recordings(table, 0, 43, 3);
    const auto d = synthesize_recordings(table, 1, 42, 3);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a != d);
    CHECK(a.size() == grid.samples);
  }
  SUBCASE("transform round trip recovers the synthesized spectrum") {
    const auto spec = synthesize_spectrum(table, 0, 7, 0);
    const auto series = synthesize_recordings(table, 0, 7, 0);
    const auto back = scaled_transform(series, grid.dt(), grid.epsilon);
    for (std::size_t b = 0; b < table.bins.size(); ++b)
      CHECK(std::abs(back[table.bins[b]] - spec[b]) <= 1e-9 * std::abs(spec[b]) + 1e-14);
  }
  SUBCASE("ensemble periodogram approaches the statistical spectrum") {
    const int n_real = 400;
    std::vector<double> mean(table.bins.size(), 0.0);
    for (int r = 0; r < n_real; ++r) {
      const auto p = periodogram(synthesize_recordings(table, 0, 99, r), grid);
      for (std::size_t b = 0; b < table.bins.size(); ++b) mean[b] += p[table.bins[b]] / n_real;
    }
    // independent bins: the relative L2 error is about 1 / sqrt(n_real)
    CHECK(rel_l2(mean, table.expected) < 0.08);
    const FrequencyGrid fg(static_cast<double>(table.bins.front()) * grid.d_omega(), grid.d_omega(),
                           table.bins.size());
    const auto closed = statistical_spectrum(m, noise, fg, 1);
    CHECK(rel_l2(table.expected, closed) < 1e-12);
  }
}

TEST_CASE("empirical autocorrelation") {
  std::vector<double> s(300);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(0.37 * i) + 0.2 * std::cos(1.9 * i * i);
  const std::size_t window = 200, lag = 60;
  const CorrelationRecord rec = empirical_autocorrelation(s, 0.1, window, lag, 0.01);
  REQUIRE(rec.lag_values.size() == lag + 1);
  for (std::size_t j = 0; j <= lag; ++j) {
    double direct = 0.0;
    for (std::size_t i = 0; i < window; ++i) direct += s[i] * s[i + j];
    CHECK(rec.lag_values[j] == doctest::Approx(direct / window).epsilon(1e-12));
  }
  CHECK(rec.record_length == doctest::Approx(20.0));

  const std::vector<double> flat(100, 2.5);
  const CorrelationRecord c = empirical_autocorrelation(flat, 1.0, 50, 10, 0.01);
  for (double v : c.lag_values) CHECK(v == doctest::Approx(6.25).epsilon(1e-12));

  CHECK_THROWS_AS(empirical_autocorrelation(flat, 1.0, 95, 10, 0.01), ContractError);
}

TEST_CASE("lag spectrum is the cosine series of the lags") {
  // C_j = r^j gives a closed-form sum
  const double r = 0.6, dt = 0.02, eps = 0.01;
  std::vector<double> c(200);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = std::pow(r, static_cast<double>(j));
  const FrequencyGrid grid(0.1, 0.3, 6);
  const auto spec = lag_spectrum(c, dt, eps, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid[k] * dt / eps;
    const double exact = dt / eps * (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(x) + r * r);
    CHECK(spec[k] == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("daylight identity") {
  const double eps = 0.01;
  const Medium m = layered_random(eps, 17);
  BandSpectrum band{1.0, 2.0, 0.15, 1.4, 2.6};
  NoiseSourceModel noise;
  noise.radial = {1.0 - 2e-4, 1.0 - 2e-6, 1.0, RadialDensity::Shape::top_hat};
  noise.spectrum = band;
  const SourceTrace pulse(eps, band, HarmonicTable(4));
  const FrequencyGrid grid = FrequencyGrid::covering(1.4, 2.6, 2e-4);
  std::vector<double> times;
  for (int j = 1; j <= 200; ++j) times.push_back(0.01 * j);

  std::vector<double> constants;
  for (int l = 0; l <= 4; ++l) {
    const DaylightReport rep = daylight_identity_check(m, noise, pulse, l, grid, times);
    CHECK(rep.correlation > 0.99);
    CHECK(rep.fitted_constant == doctest::Approx(rep.predicted_constant).epsilon(0.01));
    constants.push_back(rep.fitted_constant);
  }
  const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
  CHECK((*hi - *lo) / *lo < 0.05);

  SUBCASE("mismatched spectra are a contract violation") {
    NoiseSourceModel other = noise;
    other.spectrum.amplitude = 2.0;
    CHECK_THROWS_AS(daylight_identity_check(m, other, pulse, 1, grid, times), ContractError);
    other = noise;
    other.spectrum.band_hi = 2.0;
    CHECK_THROWS_WITH_AS(daylight_identity_check(m, other, pulse, 1, grid, times),
                         doctest::Contains("no power"), ContractError);
  }
  SUBCASE("a shifted pulse is rejected") {
    const SourceTrace shifted(eps, band, HarmonicTable(4), 0.3);
    CHECK_THROWS_AS(daylight_identity_check(m, noise, shifted, 1, grid, times), ContractError);
  }
}
