#include "doctest.h"

#include <cmath>

#include "gadi/random.hpp"
#include "gadi/robustness.hpp"

using namespace gadi;

namespace {

Medium quiet_medium(double eps, double kappa = 0.3) {
  return Medium(1.0, eps, kappa, 0.1,
                SmoothProfile::piecewise_constant({{0.0, 0.5, 1.2}, {0.5, 1.0, 1.0}}),
                FluctuationModel::none());
}

Medium rough_medium(double eps, std::uint64_t seed) {
  return Medium(1.0, eps, 0.3, 0.1,
                SmoothProfile::piecewise_constant({{0.0, 0.5, 1.2}, {0.5, 1.0, 1.0}}),
                FluctuationModel::random(0.1, 1.0, 0.2, 0.97, seed));
}

Tolerances tight() {
  Tolerances t;
  t.rel_tol = 1e-12;
  t.abs_tol = 1e-15;
  return t;
}

CorrelationRecord record(int l, int m, std::vector<double> spectrum) {
  CorrelationRecord r;
  r.l = l;
  r.m = m;
  r.provenance = "statistical";
  r.spectrum = std::move(spectrum);
  r.lag_values = {r.spectrum.front(), 0.5 * r.spectrum.front()};
  r.realizations = 1;
  return r;
}

}  // namespace

TEST_CASE("Legendre reconstruction from pair covariances") {
  const std::vector<double> times{0.0, 0.1, 0.2};
  SUBCASE("angle-independent covariance is pure l = 0") {
    AnglePairCovariance cov;
    cov.rule = pair_angle_rule(3);
    cov.times = times;
    cov.values = Eigen::MatrixXd::Constant(3, cov.rule.size(), 2.5);
    CHECK(reconstruct_Cl_from_pairs(cov, 0)[1] == doctest::Approx(2.5).epsilon(1e-14));
    for (int l = 1; l <= 3; ++l)
      for (double v : reconstruct_Cl_from_pairs(cov, l)) CHECK(std::abs(v) < 1e-13);
  }
  SUBCASE("round trip through the isotropic expansion") {
    const int l_max = 4;
    std::vector<std::vector<double>> lags(l_max + 1);
    for (int l = 0; l <= l_max; ++l)
      for (double t : times) lags[l].push_back(std::cos(3.0 * t + l) / (1.0 + l));
    const AnglePairCovariance cov = pair_covariance_from_modes(lags, times, l_max);
    for (int l = 0; l <= l_max; ++l) {
      const auto c = reconstruct_Cl_from_pairs(cov, l);
      for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(std::abs(c[i] * pair_to_mode_factor(l) - lags[l][i]) < 1e-8);
    }
  }
  SUBCASE("too few angles") {
    AnglePairCovariance cov;
    cov.rule = pair_angle_rule(1);
    cov.values = Eigen::MatrixXd::Ones(1, cov.rule.size());
    CHECK_THROWS_AS(reconstruct_Cl_from_pairs(cov, 3), ConfigError);
  }
}

TEST_CASE("node-targeted receiver pairs") {
  const QuadratureRule rule = pair_angle_rule(3);
  const PairLayout layout = node_targeted_pairs(rule, 5, 11);
  CHECK(layout.receivers.size() == 2 * 5 * static_cast<std::size_t>(rule.size()));
  for (std::size_t p = 0; p < layout.first.size(); ++p) {
    const double d = angular_distance(layout.receivers[layout.first[p]], layout.receivers[layout.second[p]]);
    CHECK(d == doctest::Approx(layout.rule.nodes[layout.angle_index[p]] == 0.0
                                   ? kPi / 2
                                   : std::acos(layout.rule.nodes[layout.angle_index[p]]))
                   .epsilon(1e-12));
  }
}

TEST_CASE("pair estimates of a white isotropic field recover the mode variances") {
  // independent white mode series with variance v_l: C_l(0) = v_l, C_l(t > 0) = 0
  const int l_max = 2;
  const std::size_t length = 20000;
  const std::vector<double> v{1.0, 0.5, 0.25};
  std::vector<std::vector<double>> modes(ModeIndex::count(l_max));
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) {
      CounterStream rng(stream_key(5, {static_cast<std::uint64_t>(ModeIndex::flat(l, m))}));
      auto& s = modes[ModeIndex::flat(l, m)];
      for (std::size_t i = 0; i < length; ++i) s.push_back(std::sqrt(v[l]) * rng.normal());
    }
  const PairLayout layout = node_targeted_pairs(pair_angle_rule(l_max), 10, 3);
  const auto field = field_at_receivers(modes, l_max, layout.receivers);
  const AnglePairCovariance cov = estimate_pair_covariance(layout, field, 1.0, length - 4, 3);
  for (int l = 0; l <= l_max; ++l) {
    const auto c = reconstruct_Cl_from_pairs(cov, l);
    CHECK(c[0] * pair_to_mode_factor(l) == doctest::Approx(v[l]).epsilon(0.05));
    CHECK(std::abs(c[2] * pair_to_mode_factor(l)) < 0.05);
  }
}

TEST_CASE("angular source weights") {
  const int l_max = 2;
  std::vector<CorrelationRecord> records;
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) records.push_back(record(l, m, {1.0, 3.0 + l, 2.0, 0.5}));

  SUBCASE("unit and doubled weights") {
    WeightTable ones(l_max), twos(l_max);
    ones.values.setOnes();
    twos.values.setConstant(2.0);
    const WeightedRecords a = apply_angular_weights(records, ones);
    const WeightedRecords b = apply_angular_weights(records, twos);
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(a.per_mode[i].spectrum == records[i].spectrum);
      for (std::size_t k = 0; k < records[i].spectrum.size(); ++k)
        CHECK(b.per_mode[i].spectrum[k] == 2.0 * records[i].spectrum[k]);
    }
  }
  SUBCASE("hemispherical sources keep peak locations and scale by sum_m G") {
    const AngularDensity north = [](double theta, double) { return theta < kPi / 2 ? 1.0 : 0.0; };
    const WeightTable g = angular_weights(north, l_max, AngularGrid(64, 9));
    const WeightedRecords w = apply_angular_weights(records, g);
    for (int l = 0; l <= l_max; ++l) {
      const auto& s = w.m_summed[l].spectrum;
      CHECK(std::max_element(s.begin(), s.end()) - s.begin() == 1);
      CHECK(s[1] == doctest::Approx(g.degree_sum(l) * (3.0 + l)).epsilon(1e-14));
      // half the sphere: sum_m G_{l,m} = (2l+1) / 2
      CHECK(g.degree_sum(l) == doctest::Approx(0.5 * (2 * l + 1)).epsilon(1e-12));
    }
  }
  SUBCASE("contract checks") {
    WeightTable ones(l_max);
    ones.values.setOnes();
    auto partial = records;
    partial.pop_back();
    CHECK_THROWS_AS(apply_angular_weights(partial, ones), ContractError);
    ones(1, 0) = -1.0;
    CHECK_THROWS_AS(apply_angular_weights(records, ones), DomainError);
  }
}

TEST_CASE("coupled modes without angular perturbation decouple") {
  const Medium m = rough_medium(0.02, 4);
  AngularPerturbation p;
  p.l_max = 2;
  for (double w : {1.3, 2.2}) {
    const CoupledModeResult r = coupled_mode_integrate(m, p, w, tight());
    const int n = ModeIndex::count(2);
    for (int i = 0; i < n; ++i) {
      const int l = ModeIndex::from_flat(i).l;
      const Complex scalar = reflection_fundamental(m, w, l, tight());
      CHECK(std::abs(r.reflection(i, i) - scalar) < 1e-10);
      for (int j = 0; j < n; ++j)
        if (j != i) CHECK(std::abs(r.reflection(i, j)) < 1e-14);
    }
    const Complex resp = response_per_unit_source(m, w, reflection_fundamental(m, w, 1, tight()));
    CHECK(std::abs(r.response(1, 1) - resp) < 1e-9 * std::abs(resp));
    CHECK(r.energy_residual < 1e-9);
  }
}

TEST_CASE("angular perturbations") {
  SUBCASE("odd profiles cancel at first order") {
    // Y_{1,0} couples l to l +- 1; B_ij (sigma_i + sigma_j) vanishes, so the
    // deviation falls like eps^{2(a-1)} or faster instead of eps^{a-1}
    AngularPerturbation p;
    p.smooth = {1.0, 1.5, 1, 0, 1.0};
    std::vector<double> eps{0.04, 0.02, 0.01}, dev;
    for (double e : eps) {
      const Medium m = quiet_medium(e);
      dev.push_back(coupled_deviation(coupled_mode_integrate(m, p, 1.75), m));
    }
    CHECK(loglog_slope(eps, dev) > 0.9);
  }
  SUBCASE("coupling conserves mode energy and the reflection stays unitary") {
    AngularPerturbation p;
    p.smooth = {0.4, 1.0, 1, 0, 1.0};
    p.mixing = {0.4, 0.5, 2, 1, 2.0};
    const CoupledModeResult r = coupled_mode_integrate(quiet_medium(0.02), p, 1.7);
    CHECK(r.energy_residual < 1e-8);
    const Eigen::MatrixXcd u = r.reflection.adjoint() * r.reflection;
    CHECK((u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm() < 1e-7);
  }
  SUBCASE("mixing component has zero mean") {
    AngularPerturbation p;
    p.mixing = {1.0, 0.5, 1, 0, 3.0};
    const PerturbationRealization real = realize_perturbation(p, 0.01);
    double mean = 0.0, var = 0.0, len = 0.0;
    for (std::size_t i = 0; i < real.mixing_values.size(); ++i) {
      const double w = real.mixing_edges[i + 1] - real.mixing_edges[i];
      mean += w * real.mixing_values[i];
      var += w * real.mixing_values[i] * real.mixing_values[i];
      len += w;
    }
    CHECK(std::abs(mean / len) < 1e-12);
    CHECK(var / len == doctest::Approx(1.0).epsilon(0.3));
  }
  SUBCASE("a smooth term with a = 1.5 fades like eps^0.5") {
    AngularPerturbation p;
    p.smooth = {1.0, 1.5, 2, 0, 1.0};
    std::vector<double> eps{0.04, 0.02, 0.01}, dev;
    for (double e : eps) {
      const Medium m = quiet_medium(e);
      double acc = 0.0;
      for (double w : {1.5, 2.0}) acc += coupled_deviation(coupled_mode_integrate(m, p, w), m);
      dev.push_back(acc / 2);
    }
    const double slope = loglog_slope(eps, dev);
    CHECK(slope > 0.3);
    CHECK(slope < 0.7);
  }
  SUBCASE("a fast zero-mean term with c = 0.5 fades") {
    AngularPerturbation p;
    p.mixing = {1.0, 0.5, 2, 0, 1.0};
    std::vector<double> eps{0.04, 0.02, 0.01}, dev;
    for (double e : eps) {
      const Medium m = quiet_medium(e);
      double acc = 0.0;
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        p.seed = seed;
        const double d = coupled_deviation(coupled_mode_integrate(m, p, 1.8), m);
        acc += d * d / 4;
      }
      dev.push_back(std::sqrt(acc));
    }
    CHECK(loglog_slope(eps, dev) > 0.0);
  }
}

TEST_CASE("measurement noise") {
  const SynthesisGrid grid = make_synthesis_grid(0.02, 40.0, 6.0);
  const std::vector<std::vector<double>> clean(4, std::vector<double>(grid.samples, 1.0));
  SUBCASE("zero noise spectrum leaves the series unchanged") {
    BandSpectrum none{0.0, 4.0, 0.5};
    CHECK(inject_measurement_noise(clean, grid, none, 3) == clean);
  }
  SUBCASE("contamination of the l = 0 coefficient is 4 pi F(0) / N") {
    BandSpectrum band{1.0, 4.0, 0.4, 2.0, 6.0};
    std::vector<double> measured;
    for (std::size_t n : {6u, 12u}) {
      const auto receivers = uniform_receivers(n, 8);
      const std::vector<std::vector<double>> zero(n, std::vector<double>(grid.samples, 0.0));
      double acc = 0.0;
      const int reps = 40;
      for (int r = 0; r < reps; ++r) {
        const auto noisy = inject_measurement_noise(zero, grid, band, 100 + r);
        const auto coeff = project_receivers(noisy, receivers, 0, 0);
        acc += empirical_cross_correlation(coeff, coeff, grid.samples - 1, 0)[0] / reps;
      }
      const double predicted = noise_floor_lags(n, band, grid.epsilon, grid.dt(), 0)[0];
      CHECK(acc == doctest::Approx(predicted).epsilon(0.1));
      measured.push_back(acc);
    }
    CHECK(measured[0] / measured[1] == doctest::Approx(2.0).epsilon(0.2));
  }
  SUBCASE("no receivers") {
    CHECK_THROWS_AS(noise_floor(0, 1.0), DomainError);
  }
}
