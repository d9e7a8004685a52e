// Symplectic 2x2 mode-amplitude propagator
//
//   P(omega, r', r) = [[a, conj(b)], [b, conj(a)]],   |a|^2 - |b|^2 = 1,
//
// obtained by integrating
//
//   d/dr (a, b) = i (omega / 2 eps) c_o V [[-1, -e^{-2i theta}], [e^{2i theta}, 1]] (a, b)
//
// with theta = omega tau(r, R_o) / eps, starting from (1, 0) at r = r'.
// The leading-order system carries no l dependence, so one propagator serves
// every angular mode.
#pragma once

#include <vector>

#include "gadi/core.hpp"
#include "gadi/medium.hpp"

namespace gadi {

struct ModePropagator {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  double omega = 1.0;
  double r_from = 0.0;
  double r_to = 0.0;

  static ModePropagator identity(double omega, double r) { return {Complex(1.0), Complex(0.0), omega, r, r}; }
  // |a|^2 - |b|^2 - 1
  double energy_residual() const { return std::norm(a) - std::norm(b) - 1.0; }
  Eigen::Matrix2cd matrix() const;
};

// P2 * P1: the propagator over [P1.r_from, P2.r_to].
ModePropagator compose(const ModePropagator& p1, const ModePropagator& p2);

// Propagator from r_to back to r_from: (conj(a), -b).
ModePropagator inverse(const ModePropagator& p);

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  // largest | |a|^2 - |b|^2 - 1 | seen at an accepted step
  double max_residual = 0.0;
  double max_step = 0.0;
  bool tightened = false;
};

// Energy drift above this at any accepted step triggers one re-integration
// with tolerances tightened 100x; a second failure raises IntegrationError.
inline constexpr double kEnergyDriftLimit = 1e-6;

ModePropagator integrate_propagator(const Medium& medium, double omega, double r_from,
                                    double r_to, const Tolerances& tol = {},
                                    IntegrationStats* stats = nullptr);

// P(r_from, r_k) for every checkpoint r_k (ascending, >= r_from) in one sweep.
std::vector<ModePropagator> integrate_checkpoints(const Medium& medium, double omega,
                                                  double r_from,
                                                  const std::vector<double>& checkpoints,
                                                  const Tolerances& tol = {},
                                                  IntegrationStats* stats = nullptr);

// Largest radial step the integrator may take at this frequency.
double max_phase_step(const Medium& medium, double omega, const Tolerances& tol);

}  // namespace gadi
