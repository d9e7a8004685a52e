// Noise sources, statistical and empirical autocorrelations, and the
// daylight identity between the autocorrelation and the symmetrized response.
//
// With E[f^_{l,m}(w, r) conj(f^_{l,m}(w', r'))] = 2 pi F^(w) K(r) delta(r - r') delta(w - w'),
// the statistical autocorrelation is C^(w) = F^(w) int K(R_s) |H_l(w, R_s)|^2 dR_s,
// where H_l is the surface field per unit point source at R_s.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gadi/core.hpp"
#include "gadi/harmonics.hpp"
#include "gadi/medium.hpp"
#include "gadi/quadrature.hpp"
#include "gadi/scattering.hpp"

namespace gadi {

struct RadialDensity {
  enum class Shape { top_hat, smooth };

  double r_lo = 0.9;
  double r_hi = 0.95;
  double level = 1.0;
  // smooth: level * sin^2 bump vanishing at both ends of the support
  Shape shape = Shape::top_hat;

  double operator()(double r) const;
  double thickness() const { return r_hi - r_lo; }
};

struct NoiseSourceModel {
  RadialDensity radial;
  BandSpectrum spectrum;
};

// Gauss panels over the support of K. panels = 0 picks the smallest count
// meeting the phase-resolution bound at omega_max.
struct SourceQuadrature {
  int order = 8;
  int panels = 0;
};

// Validates the support against the medium and the node spacing against
// phase_fraction * pi * eps * c_o / omega_max (ConfigError otherwise).
QuadratureRule source_rule(const Medium& medium, const NoiseSourceModel& noise, double omega_max,
                           const Tolerances& tol = {}, const SourceQuadrature& quad = {});

// Closed-form statistical autocorrelation at one frequency.
double statistical_autocorrelation(const Medium& medium, const NoiseSourceModel& noise,
                                   double omega, int l, const Tolerances& tol = {},
                                   const SourceQuadrature& quad = {});

std::vector<double> statistical_spectrum(const Medium& medium, const NoiseSourceModel& noise,
                                         const FrequencyGrid& grid, int l,
                                         const Tolerances& tol = {}, int threads = 1,
                                         const SourceQuadrature& quad = {});

// Surface field per unit F for a point source at R_s, from an explicit solve
// of the center, propagation, jump and surface conditions (8 unknowns).
Complex surface_transfer(const Medium& medium, double omega, int l, double source_radius,
                         const Tolerances& tol = {});

// Same quantity assembled from R^, S^, T^:
// -(i eps sqrt(c_o(R_o) c_o(R_s)) / (2 w R_o R_s)) (1 + Gamma) e^{i phi} (S^ + T^ e^{-2 i phi}) / (1 - Gamma R^)
Complex transfer_from_factors(const Medium& medium, double omega, double source_radius,
                              const SourceFactors& factors, Complex reflection);

// F^ int K |H|^2 with H from surface_transfer at every quadrature node.
double transfer_autocorrelation(const Medium& medium, const NoiseSourceModel& noise, double omega,
                                int l, const Tolerances& tol = {},
                                const SourceQuadrature& quad = {});

// Thin-annulus limit (S^ = 1, T^ = R^, tau(R_s, R_o) = 0):
// eps^2 F^ c_o(R_o) / (4 R_o^2 w^2) [int c_o K / R_s^2] |1 + Gamma|^2 |1 + R^|^2 / |1 - Gamma R^|^2.
// Requires thickness <= wavelength_fraction * eps * c_o(R_o) / omega.
double thin_annulus_autocorrelation(const Medium& medium, const NoiseSourceModel& noise,
                                    double omega, int l, const Tolerances& tol = {});

std::vector<double> thin_annulus_spectrum(const Medium& medium, const NoiseSourceModel& noise,
                                          const FrequencyGrid& grid, int l,
                                          const Tolerances& tol = {}, int threads = 1);

// int c_o(R_s) K(R_s) / R_s^2 dR_s
double source_strength(const Medium& medium, const RadialDensity& radial);

// ------------------------------------------------------------ synthesis

// Uniform time grid of a synthesized record; d_omega = 2 pi eps / T so the
// discrete transform matches the scaled Fourier convention.
struct SynthesisGrid {
  double epsilon = 0.01;
  double record_length = 1.0;
  std::size_t samples = 0;
  double dt() const { return record_length / static_cast<double>(samples); }
  double d_omega() const { return 2.0 * kPi * epsilon / record_length; }
};

// Even sample count with Nyquist frequency pi eps / dt >= 1.25 omega_max.
SynthesisGrid make_synthesis_grid(double epsilon, double record_length, double omega_max);

// Transfer functions H_l(w_k, R_i) on the positive bins where F^ > 0.
struct TransferTable {
  int l = 0;
  SynthesisGrid grid;
  std::vector<std::size_t> bins;
  std::vector<double> spectrum;  // F^ per bin
  QuadratureRule nodes;
  std::vector<double> density;  // K per node
  // H[b * nodes + i]
  std::vector<Complex> transfer;
  // C^ per bin (closed-form statistical autocorrelation with the same nodes)
  std::vector<double> expected;
};

TransferTable build_transfer_table(const Medium& medium, const NoiseSourceModel& noise,
                                   const SynthesisGrid& grid, int l, const Tolerances& tol = {},
                                   int threads = 1, const SourceQuadrature& quad = {});

// Positive-frequency spectrum p^_k of one realization (same bin order as the table).
std::vector<Complex> synthesize_spectrum(const TransferTable& table, int m, std::uint64_t seed,
                                         std::uint64_t realization, double angular_weight = 1.0);

// Real series (d_omega / 2 pi) sum_k y_k e^{-i w_k t_j / eps} over +-bins, with
// y_{-k} = conj(y_k); bins must lie in [1, samples / 2).
std::vector<double> series_from_spectrum(const SynthesisGrid& grid, const std::vector<std::size_t>& bins,
                                         const std::vector<Complex>& values);

// Real time series p_{l,m}(t_j), j < grid.samples, of one realization.
std::vector<double> synthesize_recordings(const TransferTable& table, int m, std::uint64_t seed,
                                          std::uint64_t realization, double angular_weight = 1.0);

// Convenience path: builds the table, then synthesizes.
std::vector<double> synthesize_recordings(const Medium& medium, const NoiseSourceModel& noise, int l,
                                          int m, double record_length, std::uint64_t seed,
                                          std::uint64_t realization = 0, const Tolerances& tol = {});

// p^_k = (dt / eps) sum_j p_j e^{i w_k t_j / eps} for k = 0 .. samples / 2.
std::vector<Complex> scaled_transform(const std::vector<double>& series, double dt, double epsilon);

// (d_omega / 2 pi) |p^_k|^2, whose expectation is C^(w_k).
std::vector<double> periodogram(const std::vector<double>& series, const SynthesisGrid& grid);

// ---------------------------------------------------------- correlation

struct CorrelationRecord {
  int l = 0;
  int m = 0;
  std::string provenance;  // statistical | empirical | thin-annulus
  double epsilon = 0.01;
  double record_length = 0.0;
  std::size_t realizations = 0;
  double dt = 0.0;
  std::vector<double> lag_values;  // C(j dt), j = 0 .. max_lag
  FrequencyGrid grid;
  std::vector<double> spectrum;  // C^ on grid
};

// C^T(j dt) = (1/T) int_0^T p(t) p(t + j dt) dt with T = window * dt.
// Needs series.size() >= window + max_lag.
CorrelationRecord empirical_autocorrelation(const std::vector<double>& series, double dt,
                                            std::size_t window, std::size_t max_lag,
                                            double epsilon);

// (1/window) sum_{i < window} x_i y_{i+j}, j = 0 .. max_lag (FFT based).
std::vector<double> empirical_cross_correlation(const std::vector<double>& x,
                                                const std::vector<double>& y, std::size_t window,
                                                std::size_t max_lag);

// C^T(w) = (dt / eps) [C_0 + 2 sum_{j >= 1} C_j cos(w j dt / eps)]
std::vector<double> lag_spectrum(const std::vector<double>& lag_values, double dt, double epsilon,
                                 const FrequencyGrid& grid);

// ----------------------------------------------------- daylight identity

struct DaylightReport {
  int l = 0;
  std::vector<double> t;
  std::vector<double> d_correlation;  // d/dt C(t)
  std::vector<double> p_sym;          // p^sym(t)
  double correlation = 0.0;           // normalized inner product
  double fitted_constant = 0.0;       // argmin |dC - c p_sym|
  double predicted_constant = 0.0;    // J (1 + Gamma) / (2 (1 - Gamma))
};

// Both traces are sine series over the common frequency grid; C uses the
// Closed-form statistical autocorrelation for the given noise support.
DaylightReport daylight_identity_check(const Medium& medium, const NoiseSourceModel& noise,
                                       const SourceTrace& source, int l, const FrequencyGrid& grid,
                                       const std::vector<double>& times, const Tolerances& tol = {},
                                       int threads = 1);

}  // namespace gadi
