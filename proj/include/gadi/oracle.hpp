// Exact radial mode solve, used as ground truth for the WKB results.
//
// With y = (p, r^2 p') the scaled-frequency mode equation
//   (r^2 p')' - l(l+1) p + (omega/eps)^2 (1/c_o^2 + V) r^2 p = F delta(r - R_s)
// becomes y' = [[0, 1/r^2], [l(l+1) - k^2 r^2, 0]] y. It is integrated with
// 4-stage Gauss-Legendre collocation (order 8), steps snapped to every jump
// of c_o and V. The regular interior solution starts from j_l at
// R_delta = r_core / 2; the surface solution satisfies
//   p' - p / R_o = i kappa (omega / eps) p,
// the frequency-domain form of p' - p/r = -kappa dp/dt.
#pragma once

#include <functional>
#include <vector>

#include "gadi/core.hpp"
#include "gadi/medium.hpp"

namespace gadi {

struct OracleOptions {
  // collocation steps per local wavelength 2 pi / k
  double steps_per_wavelength = 24.0;
  // R_delta / r_core
  double center_fraction = 0.5;
};

struct RadialState {
  Complex p;
  Complex flux;  // r^2 dp/dr
};

struct RadialSolve {
  double omega = 1.0;
  int l = 0;
  double source_radius = 1.0;
  // nodes of the collocation mesh and the solution there (unit source)
  std::vector<double> r;
  std::vector<Complex> p;
  std::vector<Complex> r2_dp;
  Complex surface_value;
  // residuals of the surface and center conditions after assembly
  double surface_residual = 0.0;
  double center_residual = 0.0;
};

// Regular solution from R_delta up to r_end, normalized by j_l at R_delta.
RadialState integrate_regular(const Medium& medium, double omega, int l, double r_end,
                              const OracleOptions& opt = {});

// Surface solution (p(R_o) = 1) carried down to r_end.
RadialState integrate_surface(const Medium& medium, double omega, int l, double r_end,
                              const OracleOptions& opt = {});

// Surface field per unit F for a source at R_s in (r_core, R_o].
Complex direct_surface_response(const Medium& medium, double source_radius, double omega, int l,
                                const OracleOptions& opt = {});

// Full solution on the collocation mesh (for diagnostics and flux checks).
RadialSolve solve_radial(const Medium& medium, double source_radius, double omega, int l,
                         const OracleOptions& opt = {});

// Eigenfrequencies of the lossless problem in [omega_lo, omega_hi]: sign
// changes of p'(R_o) - p(R_o)/R_o for the regular solution, bisected to tol.
std::vector<double> direct_eigenfrequencies(const Medium& medium, int l, double omega_lo,
                                            double omega_hi, double tol = 1e-10,
                                            const OracleOptions& opt = {});

struct WkbErrorRow {
  double epsilon = 0.0;
  double omega = 0.0;
  int l = 0;
  double rel_error = 0.0;
};

struct WkbErrorReport {
  std::vector<WkbErrorRow> rows;
  std::vector<double> epsilons;
  // sqrt(sum |wkb - exact|^2 / sum |exact|^2) over the (omega, l) set at each eps
  std::vector<double> aggregate_error;
  // least-squares slope of log(aggregate_error) against log(eps)
  double fitted_order = 0.0;
};

using MediumFactory = std::function<Medium(double epsilon)>;

WkbErrorReport wkb_error_report(const MediumFactory& make_medium, const std::vector<double>& omegas,
                                const std::vector<int>& ls, const std::vector<double>& epsilons,
                                int threads = 1, const OracleOptions& opt = {});

}  // namespace gadi
