#include "doctest.h"

#include <cmath>

#include "gadi/medium.hpp"

using namespace gadi;

namespace {

Medium homogeneous(double c, double kappa = 0.0) {
  return Medium(1.0, 0.01, kappa, 0.1, SmoothProfile::constant(c, 1.0), FluctuationModel::none());
}

Medium two_layer() {
  return Medium(1.0, 0.01, 0.0, 0.1,
                SmoothProfile::piecewise_constant({{0.0, 0.5, 1.0}, {0.5, 1.0, 2.0}}),
                FluctuationModel::none());
}

}  // namespace

TEST_CASE("travel time of simple profiles") {
  CHECK(travel_time(homogeneous(1.0), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(travel_time(homogeneous(2.0), 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(travel_time(two_layer(), 0.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(travel_time(two_layer(), 0.3, 0.3) == 0.0);
}

TEST_CASE("travel time rejects radii outside [0, R_o]") {
  const Medium m = homogeneous(1.0);
  CHECK_THROWS_AS(travel_time(m, -0.1, 1.0), DomainError);
  CHECK_THROWS_AS(travel_time(m, 0.5, 0.4), DomainError);
  CHECK_THROWS_AS(travel_time(m, 0.5, 1.2), DomainError);
}

TEST_CASE("travel time is additive for a spline profile") {
  const Medium m(1.0, 0.01, 0.0, 0.2,
                 SmoothProfile::sampled({0.2, 0.5, 0.8, 1.0}, {1.5, 1.3, 1.1, 1.0}),
                 FluctuationModel::none());
  for (double r : {0.0, 0.15, 0.3, 0.55}) {
    for (double mid : {0.6, 0.75, 0.9}) {
      const double whole = travel_time(m, r, 1.0);
      const double split = travel_time(m, r, mid) + travel_time(m, mid, 1.0);
      CHECK(std::abs(whole - split) < 1e-13);
    }
  }
  // Independent check of the quadrature: fine trapezoid rule on 1/c.
  const int n = 200000;
  double trap = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = 0.2 + 0.8 * i / n;
    trap += (i == 0 || i == n ? 0.5 : 1.0) / m.speed(r);
  }
  trap *= 0.8 / n;
  CHECK(std::abs(travel_time(m, 0.2, 1.0) - trap) < 1e-10);
}

TEST_CASE("surface reflectivity") {
  CHECK(gamma_surface(homogeneous(1.0, 0.0)) == 1.0);
  CHECK(gamma_surface(homogeneous(1.0, 1.0)) == doctest::Approx(0.0));
  CHECK(gamma_surface(homogeneous(1.0, 3.0)) == doctest::Approx(-0.5));
  double prev = 1.0;
  for (double kappa = 0.05; kappa < 10.0; kappa *= 1.7) {
    const double g = gamma_surface(homogeneous(1.3, kappa));
    CHECK(g < prev);
    CHECK(g > -1.0);
    prev = g;
  }
}

TEST_CASE("slowness perturbation kinds") {
  CHECK(slowness_perturbation(homogeneous(1.0), 0.5) == 0.0);

  const Medium layered(1.0, 0.01, 0.0, 0.1, SmoothProfile::constant(1.0, 1.0),
                       FluctuationModel::layered({{0.4, 0.6, 0.1}}));
  CHECK(slowness_perturbation(layered, 0.5) == 0.1);
  CHECK(slowness_perturbation(layered, 0.39) == 0.0);
  CHECK(slowness_perturbation(layered, 0.61) == 0.0);
  CHECK(slowness_perturbation(layered, 0.05) == 0.0);

  const Medium rnd(1.0, 0.02, 0.0, 0.1, SmoothProfile::constant(1.0, 1.0),
                   FluctuationModel::random(0.2, 1.0, 0.3, 0.9, 42));
  CHECK(slowness_perturbation(rnd, 0.2) == 0.0);
  CHECK(slowness_perturbation(rnd, 0.95) == 0.0);
  double sum2 = 0.0;
  for (double v : rnd.fluctuation_values()) {
    CHECK(std::abs(v) <= 0.2 * std::sqrt(3.0));
    sum2 += v * v;
  }
  CHECK(rnd.fluctuation_values().size() == 30);
  CHECK(sum2 / 30.0 == doctest::Approx(0.04).epsilon(0.5));
}

TEST_CASE("frozen random media are reproducible") {
  auto make = [](std::uint64_t seed) {
    return Medium(1.0, 0.01, 0.0, 0.1, SmoothProfile::constant(1.0, 1.0),
                  FluctuationModel::random(0.1, 0.5, 0.2, 0.95, seed));
  };
  const Medium a = make(7);
  const Medium b = make(7);
  const Medium c = make(8);
  bool any_diff = false;
  for (double r = 0.2; r < 0.95; r += 0.0013) {
    CHECK(slowness_perturbation(a, r) == slowness_perturbation(a, r));
    CHECK(slowness_perturbation(a, r) == slowness_perturbation(b, r));
    any_diff |= slowness_perturbation(a, r) != slowness_perturbation(c, r);
  }
  CHECK(any_diff);
}

TEST_CASE("medium validation") {
  auto prof = SmoothProfile::constant(1.0, 1.0);
  CHECK_THROWS_AS(Medium(1.0, 0.0, 0.0, 0.1, prof, FluctuationModel::none()), DomainError);
  CHECK_THROWS_AS(Medium(1.0, 0.01, -1.0, 0.1, prof, FluctuationModel::none()), DomainError);
  CHECK_THROWS_AS(Medium(1.0, 0.01, 0.0, 1.0, prof, FluctuationModel::none()), DomainError);
  // fluctuation reaching into the core
  CHECK_THROWS_AS(Medium(1.0, 0.01, 0.0, 0.3, prof, FluctuationModel::layered({{0.2, 0.5, 0.1}})),
                  DomainError);
  // non-positive total slowness
  CHECK_THROWS_AS(Medium(1.0, 0.01, 0.0, 0.1, prof, FluctuationModel::layered({{0.2, 0.5, -1.5}})),
                  DomainError);
  // c_o varying inside the core
  CHECK_THROWS_AS(Medium(1.0, 0.01, 0.0, 0.6,
                         SmoothProfile::piecewise_constant({{0.0, 0.5, 1.0}, {0.5, 1.0, 2.0}}),
                         FluctuationModel::none()),
                  DomainError);
  CHECK_THROWS_AS(SmoothProfile::piecewise_constant({{0.0, 0.5, 1.0}, {0.6, 1.0, 2.0}}),
                  DomainError);
  CHECK_THROWS_AS(SmoothProfile::constant(-1.0, 1.0), DomainError);
}
