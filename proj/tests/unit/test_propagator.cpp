#include "doctest.h"

#include <cmath>

#include "gadi/propagator.hpp"

using namespace gadi;

namespace {

Medium layered_medium(double eps, std::vector<Layer> layers, double c = 1.0) {
  return Medium(1.0, eps, 0.5, 0.1, SmoothProfile::constant(c, 1.0),
                FluctuationModel::layered(std::move(layers)));
}

// Closed-form transfer across cells where c and V are both constant: in the
// rotated variables A = a e^{i theta}, B = b e^{-i theta} the system has
// constant coefficients i N with N^2 = lambda^2 I.
ModePropagator exact_piecewise(const Medium& m, double omega, double r0, double r1) {
  std::vector<double> nodes{r0, r1};
  for (double e : m.fluctuation_edges())
    if (e > r0 && e < r1) nodes.push_back(e);
  std::sort(nodes.begin(), nodes.end());
  const double eps = m.epsilon();
  Complex a = 1.0, b = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double s0 = nodes[i], s1 = nodes[i + 1];
    const double c = m.speed(0.5 * (s0 + s1));
    const double v = slowness_perturbation(m, 0.5 * (s0 + s1));
    const double q = -omega / (eps * c);
    const double k = omega * c * v / (2.0 * eps);
    const double th0 = omega * m.travel_time_to_surface(s0) / eps;
    const double th1 = omega * m.travel_time_to_surface(s1) / eps;
    const double lambda = std::sqrt(q * q - 2.0 * q * k);
    const double d = s1 - s0;
    const Complex A = a * std::polar(1.0, th0);
    const Complex B = b * std::polar(1.0, -th0);
    const Complex i_sinc = Complex(0.0, std::sin(lambda * d) / lambda);
    const Complex An = std::cos(lambda * d) * A + i_sinc * ((q - k) * A - k * B);
    const Complex Bn = std::cos(lambda * d) * B + i_sinc * (k * A + (k - q) * B);
    a = An * std::polar(1.0, -th1);
    b = Bn * std::polar(1.0, th1);
  }
  return {a, b, omega, r0, r1};
}

double distance(const ModePropagator& p, const ModePropagator& q) {
  return std::max(std::abs(p.a - q.a), std::abs(p.b - q.b));
}

}  // namespace

TEST_CASE("homogeneous medium gives the identity exactly") {
  const Medium m(1.0, 0.01, 0.3, 0.1, SmoothProfile::constant(1.0, 1.0), FluctuationModel::none());
  for (double w : {0.5, 1.3, 2.9}) {
    const ModePropagator p = integrate_propagator(m, w, 0.1, 1.0);
    CHECK(p.a == Complex(1.0));
    CHECK(p.b == Complex(0.0));
  }
  const ModePropagator id = integrate_propagator(m, 1.0, 0.4, 0.4);
  CHECK(id.a == Complex(1.0));
  CHECK(id.b == Complex(0.0));
}

TEST_CASE("agreement with the closed-form cell transfer") {
  const Medium m = layered_medium(0.02, {{0.3, 0.45, 0.3}, {0.45, 0.5, -0.2}, {0.7, 0.85, 0.5}}, 1.2);
  for (double w : {0.7, 1.5, 2.6}) {
    const ModePropagator num = integrate_propagator(m, w, 0.1, 1.0);
    const ModePropagator ref = exact_piecewise(m, w, 0.1, 1.0);
    CHECK(distance(num, ref) < 1e-7);
    CHECK(std::abs(ref.energy_residual()) < 1e-12);
  }
  const Medium rnd(1.0, 0.01, 0.5, 0.1, SmoothProfile::constant(1.0, 1.0),
                   FluctuationModel::random(0.15, 1.0, 0.2, 0.95, 11));
  for (double w : {1.0, 2.2}) CHECK(distance(integrate_propagator(rnd, w, 0.1, 1.0),
                                              exact_piecewise(rnd, w, 0.1, 1.0)) < 1e-7);
}

TEST_CASE("energy is conserved for every fluctuation kind") {
  std::vector<Medium> media;
  media.push_back(layered_medium(0.01, {{0.2, 0.4, 0.2}, {0.6, 0.9, -0.3}}));
  media.emplace_back(1.0, 0.01, 0.2, 0.15, SmoothProfile::constant(1.0, 1.0),
                     FluctuationModel::random(0.1, 0.7, 0.2, 0.98, 5));
  media.emplace_back(1.0, 0.02, 0.2, 0.2,
                     SmoothProfile::sampled({0.2, 0.5, 0.8, 1.0}, {1.6, 1.3, 1.1, 1.0}),
                     FluctuationModel::random(0.1, 1.0, 0.25, 0.95, 6));
  for (const Medium& m : media) {
    for (double w = 0.8; w < 3.0; w += 0.37) {
      IntegrationStats stats;
      const ModePropagator p = integrate_propagator(m, w, m.core_radius(), 1.0, {}, &stats);
      CHECK(std::abs(p.energy_residual()) < 1e-8);
      CHECK(stats.max_residual < 1e-8);
      CHECK(stats.accepted > 0);
      CHECK(stats.max_step <= max_phase_step(m, w, {}) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("weak layer matches the Born approximation") {
  const double eps = 0.02;
  const double w = 1.7;
  // b ~ i (w / 2 eps) delta int_{0.4}^{0.6} e^{2 i w (1 - r) / eps} dr for c = 1
  auto born = [&](double delta) {
    const Complex k(0.0, 2.0 * w / eps);
    const Complex integral = (std::exp(k * 0.6) - std::exp(k * 0.4)) / k;  // over 1 - r
    return Complex(0.0, w / (2.0 * eps)) * delta * integral;
  };
  double prev = 0.0;
  for (double delta : {1e-2, 1e-3}) {
    const ModePropagator p = integrate_propagator(layered_medium(eps, {{0.4, 0.6, delta}}), w, 0.1, 1.0);
    const double rel = std::abs(p.b - born(delta)) / std::abs(born(delta));
    CHECK(rel < 10.0 * delta * w / eps * 0.2);
    if (prev > 0.0) CHECK(rel < prev / 5.0);
    prev = rel;
  }
}

TEST_CASE("composition and group property") {
  const Medium m(1.0, 0.01, 0.5, 0.1, SmoothProfile::constant(1.0, 1.0),
                 FluctuationModel::random(0.12, 1.0, 0.2, 0.95, 3));
  const double w = 2.1;
  const ModePropagator whole = integrate_propagator(m, w, 0.1, 1.0);
  for (double split : {0.25, 0.5123, 0.77}) {
    const ModePropagator lo = integrate_propagator(m, w, 0.1, split);
    const ModePropagator hi = integrate_propagator(m, w, split, 1.0);
    const ModePropagator c = compose(lo, hi);
    CHECK(distance(c, whole) < 1e-7);
    CHECK(std::abs(c.energy_residual()) < 1e-8);
    CHECK(c.r_from == 0.1);
    CHECK(c.r_to == 1.0);
    CHECK(distance(compose(ModePropagator::identity(w, 0.1), lo), lo) == 0.0);
    CHECK(distance(compose(lo, inverse(lo)), ModePropagator::identity(w, 0.1)) < 1e-8);
    // matrix form: P(0.1, 1) = P(split, 1) P(0.1, split)
    CHECK((hi.matrix() * lo.matrix() - c.matrix()).norm() < 1e-14);
  }
  const auto checkpoints = integrate_checkpoints(m, w, 0.1, {0.3, 0.3, 0.6, 1.0});
  REQUIRE(checkpoints.size() == 4);
  CHECK(distance(checkpoints[3], whole) < 1e-7);
  CHECK(distance(checkpoints[1], integrate_propagator(m, w, 0.1, 0.3)) < 1e-7);
  CHECK(checkpoints[0].a == checkpoints[1].a);

  const ModePropagator other = integrate_propagator(m, w, 0.3, 1.0);
  CHECK_THROWS_AS(compose(whole, other), ContractError);
  CHECK_THROWS_AS(compose(integrate_propagator(m, 1.0, 0.1, 0.3), other), ContractError);
}

TEST_CASE("unreachable tolerance raises an integration error") {
  const Medium m = layered_medium(0.01, {{0.3, 0.6, 0.2}});
  Tolerances tol;
  tol.rel_tol = 1e-19;
  tol.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate_propagator(m, 2.0, 0.1, 1.0, tol), IntegrationError);
  CHECK_THROWS_AS(integrate_propagator(m, -1.0, 0.1, 1.0), DomainError);
  CHECK_THROWS_AS(integrate_propagator(m, 1.0, 0.6, 0.5), DomainError);
}
