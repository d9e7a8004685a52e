// Reflection function, point-source response and scattering operator.
//
// Fourier convention: f^(omega) = (1/eps) int f(t) e^{i omega t / eps} dt and
// f(t) = (1/2 pi) int f^(omega) e^{-i omega t / eps} d omega.
//
// With (a, b) = P(0, R_o), E = e^{2 i omega tau(0, R_o) / eps} and the parity
// sign s_l = (-1)^{l+1} of the regular solution at the center,
//
//   R^_l = (b + conj(a) s_l E) / (a + conj(b) s_l E),   |R^_l| = 1.
//
// The lower endpoint 0 is realized at r_core: V vanishes in the core, so the
// propagator is the identity there.
#pragma once

#include <limits>
#include <vector>

#include "gadi/core.hpp"
#include "gadi/harmonics.hpp"
#include "gadi/medium.hpp"
#include "gadi/propagator.hpp"

namespace gadi {

// |1 - Gamma R^| below this is treated as a resonance.
inline constexpr double kResonanceGuard = 1e-10;

// Real, even power/pulse spectrum: a pair of Gaussian lobes at +-center,
// cut to zero for |omega| outside [band_lo, band_hi].
struct BandSpectrum {
  double amplitude = 1.0;
  double center = 2.0;
  double width = 0.25;
  double band_lo = 0.0;
  double band_hi = std::numeric_limits<double>::infinity();

  double operator()(double omega) const;
  bool operator==(const BandSpectrum&) const = default;
};

class SourceTrace {
 public:
  // time_shift != 0 displaces the pulse, f(t - t0), which breaks evenness.
  SourceTrace(double epsilon, BandSpectrum spectrum, HarmonicTable g, double time_shift = 0.0);

  double epsilon() const { return epsilon_; }
  const BandSpectrum& spectrum() const { return spectrum_; }
  const HarmonicTable& angular() const { return g_; }
  double time_shift() const { return time_shift_; }
  bool is_even() const { return time_shift_ == 0.0; }

  // f^(omega)
  Complex transform(double omega) const;
  // F_{l,m}(omega) = f^(omega) g_{l,m}
  Complex coefficient(double omega, int l, int m) const;
  // f(t) by quadrature of the inverse transform
  double sample(double t) const;

 private:
  double epsilon_;
  BandSpectrum spectrum_;
  HarmonicTable g_;
  double time_shift_;
};

inline int parity_sign(int l) { return (l % 2 == 0) ? -1 : 1; }

// e^{2 i omega tau(0, R_o) / eps}
Complex center_phase(const Medium& medium, double omega);

Complex reflection_from_propagator(const ModePropagator& interior, Complex center_phase, int l);

Complex reflection_fundamental(const Medium& medium, double omega, int l,
                               const Tolerances& tol = {});

// |1 + R|^2 / |1 - Gamma R|^2 with the resonance guard.
double scattering_value(double gamma, Complex reflection, double omega);

// -(i eps c_o(R_o) / (omega R_o^2)) ((1 + Gamma) / 2) (1 + R) / (1 - Gamma R):
// the surface response per unit F_{l,m}.
Complex response_per_unit_source(const Medium& medium, double omega, Complex reflection);

Complex point_source_response(const Medium& medium, const SourceTrace& source, double omega,
                              int l, int m, const Tolerances& tol = {});

Complex symmetrized_response(const Medium& medium, const SourceTrace& source, double omega, int l,
                             int m, const Tolerances& tol = {});

double scattering_operator(const Medium& medium, double omega, int l, const Tolerances& tol = {});

// S^ and T^ at one source radius from P(0, R_s) and P(0, R_o).
struct SourceFactors {
  Complex s;
  Complex t;
};
SourceFactors source_factors(const ModePropagator& to_source, const ModePropagator& to_surface,
                             Complex center_phase, int l);

struct ScatteringSpectrum {
  int l = 1;
  double gamma = 1.0;
  FrequencyGrid grid;
  std::vector<Complex> reflection;
  // scattering operator; +inf where |1 - Gamma R^| hits the resonance guard
  std::vector<double> operator_value;
  std::vector<double> source_radii;
  // [k][j]: frequency k, source radius j
  std::vector<std::vector<Complex>> s_hat;
  std::vector<std::vector<Complex>> t_hat;
  std::vector<double> max_energy_residual;
};

ScatteringSpectrum compute_spectrum(const Medium& medium, const FrequencyGrid& grid, int l,
                                    const std::vector<double>& source_radii = {},
                                    const Tolerances& tol = {}, int threads = 1);

struct SpectralPeak {
  double omega = 0.0;
  double value = 0.0;
  // full width at half maximum; NaN when a side of the peak leaves the grid
  double width = 0.0;
  // kappa = 0 (the peak is a pole) or the grid hit the resonance guard
  bool divergent = false;
};

std::vector<SpectralPeak> find_peaks(const FrequencyGrid& grid, const std::vector<double>& values,
                                     bool lossless);

std::vector<SpectralPeak> eigenfrequency_scan(const Medium& medium, const FrequencyGrid& grid,
                                              int l, const Tolerances& tol = {}, int threads = 1);

}  // namespace gadi
