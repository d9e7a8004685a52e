// Partial-aperture reconstruction, angular source weighting, angularly
// perturbed media and additive measurement noise.
#pragma once

#include <cstdint>
#include <vector>

#include "gadi/core.hpp"
#include "gadi/daylight.hpp"
#include "gadi/harmonics.hpp"
#include "gadi/medium.hpp"
#include "gadi/quadrature.hpp"
#include "gadi/scattering.hpp"

namespace gadi {

// ------------------------------------------------- pair covariance

struct SurfacePoint {
  double theta = 0.0;
  double phi = 0.0;
};

double angular_distance(const SurfacePoint& x, const SurfacePoint& y);

// Samples of E[p(0, x) p(t, x')] at angular separations Omega_j. The
// separations are the Gauss-Legendre nodes in cos(Omega) of `rule`.
struct AnglePairCovariance {
  QuadratureRule rule;          // in x = cos(Omega)
  std::vector<double> times;    // row labels (lags or any linear index)
  Eigen::MatrixXd values;       // times x angles
  std::size_t pairs_per_angle = 0;
  std::size_t realizations = 0;

  double angle(Eigen::Index j) const { return std::acos(rule.nodes[j]); }
};

// Gauss nodes in cos(Omega), exact for Legendre products up to degree 2 * l_max.
QuadratureRule pair_angle_rule(int l_max);

// C_l(t) = (2l+1)/2 int C(t, Omega) P_l(cos Omega) sin(Omega) dOmega, one
// value per time row. ConfigError when the angle rule cannot resolve degree 2l.
std::vector<double> reconstruct_Cl_from_pairs(const AnglePairCovariance& cov, int l);

// With p = sum p_{l,m} Y_{l,m} and E[p_{l,m}(0) p_{l,m}(t)] = C_l(t),
// C(t, Omega) = sum_l C_l(t) (2l+1)/(4 pi) P_l(cos Omega). This factor
// converts a Legendre coefficient of the pair covariance to C_l.
inline double pair_to_mode_factor(int l) { return 4.0 * kPi / (2.0 * l + 1.0); }

// Pair covariance of an isotropic field built from mode autocorrelations.
AnglePairCovariance pair_covariance_from_modes(const std::vector<std::vector<double>>& mode_lags,
                                               const std::vector<double>& times, int l_max);

struct PairLayout {
  QuadratureRule rule;
  std::vector<SurfacePoint> receivers;
  // receivers[first[i]] and receivers[second[i]] are separated by angle(angle_index[i])
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  std::vector<Eigen::Index> angle_index;
};

// pairs_per_angle pairs per node: random anchor, partner at the node angle
// along a random bearing. 2 * pairs_per_angle * nodes receivers in total.
PairLayout node_targeted_pairs(const QuadratureRule& rule, std::size_t pairs_per_angle,
                               std::uint64_t seed);

// p(t, x) = sum_{l,m} p_{l,m}(t) Y^real_{l,m}(x); mode_series indexed by ModeIndex::flat.
std::vector<std::vector<double>> field_at_receivers(
    const std::vector<std::vector<double>>& mode_series, int l_max,
    const std::vector<SurfacePoint>& receivers);

// Empirical cross correlations averaged over the pairs of each node (both orders).
AnglePairCovariance estimate_pair_covariance(const PairLayout& layout,
                                             const std::vector<std::vector<double>>& receiver_series,
                                             double dt, std::size_t window, std::size_t max_lag);

// ------------------------------------------------- angular weights

struct WeightedRecords {
  std::vector<CorrelationRecord> per_mode;
  // one record per l: sum_m G_{l,m} C_{l,m}
  std::vector<CorrelationRecord> m_summed;
};

// records must contain every (l, m) with l <= weights.l_max exactly once.
WeightedRecords apply_angular_weights(const std::vector<CorrelationRecord>& records,
                                      const WeightTable& weights);

// ------------------------------------------------- angular medium perturbations

// One term eps^exponent * amplitude * s(r) * Y^real_{degree,order}(theta, phi).
// Odd degrees only couple modes of opposite parity, whose first-order
// contributions to the reflection cancel; the default is even.
struct PerturbationComponent {
  double amplitude = 0.0;
  double exponent = 2.0;
  int degree = 2;
  int order = 0;
  // cell length in the fast variable (r / eps or r / eps^2)
  double correlation = 1.0;
};

// V_2 = eps^a V21(r) + eps^b V22(r / eps) + eps^c V23(r / eps^2), all supported on [r_lo, r_hi].
//   V21: sin(pi (r - r_lo) / (r_hi - r_lo))
//   V22: +-1 on cells of length eps * correlation
//   V23: AR(1) cells of length eps^2, lag-one correlation exp(-1 / correlation),
//        unit variance, sample mean removed (zero mean over the support)
struct AngularPerturbation {
  PerturbationComponent smooth;
  PerturbationComponent layered;
  PerturbationComponent mixing;
  double r_lo = 0.3;
  double r_hi = 0.9;
  std::uint64_t seed = 0;
  int l_max = 2;
};

struct CoupledModeResult {
  int l_max = 0;
  double omega = 1.0;
  // generalized reflection, beta(R_o) = R alpha(R_o), modes in ModeIndex::flat order
  Eigen::MatrixXcd reflection;
  // surface field per unit source at R_o, matrix form of the point-source response
  Eigen::MatrixXcd response;
  // max |(Y* J Y - Y0* J Y0)_ij| / max |Y_ij|^2 with J = diag(I, -I): the
  // mode energy sum |alpha|^2 - |beta|^2 is conserved in the lossless interior
  double energy_residual = 0.0;
  long steps = 0;
};

// Cell values of the fast components for one eps (exposed for tests).
struct PerturbationRealization {
  std::vector<double> layered_edges, layered_values;
  std::vector<double> mixing_edges, mixing_values;
};
PerturbationRealization realize_perturbation(const AngularPerturbation& p, double epsilon);

CoupledModeResult coupled_mode_integrate(const Medium& medium, const AngularPerturbation& p,
                                         double omega, const Tolerances& tol = {});

// || R_perturbed - diag(R^_l) ||_F / sqrt(mode count)
double coupled_deviation(const CoupledModeResult& result, const Medium& medium,
                         const Tolerances& tol = {});

// ------------------------------------------------- measurement noise

// Uniformly random points on the sphere.
std::vector<SurfacePoint> uniform_receivers(std::size_t count, std::uint64_t seed);

// Adds independent stationary Gaussian noise with power spectrum F^n to each series.
std::vector<std::vector<double>> inject_measurement_noise(const std::vector<std::vector<double>>& series,
                                                          const SynthesisGrid& grid,
                                                          const BandSpectrum& noise,
                                                          std::uint64_t seed);

// Harmonic coefficient from N uniformly spread receivers: (4 pi / N) sum_i p_i Y^real_{l,m}(x_i).
std::vector<double> project_receivers(const std::vector<std::vector<double>>& series,
                                      const std::vector<SurfacePoint>& receivers, int l, int m);

// Expected additive bias of the mode autocorrelation: 4 pi F^n / N.
double noise_floor(std::size_t receivers, double noise_value);
// Same at lag j dt, with F^n(t) = (1/pi) int_0^inf F^n(w) cos(w t / eps) dw.
std::vector<double> noise_floor_lags(std::size_t receivers, const BandSpectrum& noise,
                                     double epsilon, double dt, std::size_t max_lag);

}  // namespace gadi
