// Run configuration: strict JSON parsing, defaults and cross-field validation.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gadi/core.hpp"
#include "gadi/daylight.hpp"
#include "gadi/medium.hpp"
#include "gadi/robustness.hpp"
#include "gadi/scattering.hpp"

namespace gadi {

struct ProfileSpec {
  std::string kind = "constant";  // constant | piecewise_constant | sampled
  double speed = 1.0;
  std::vector<Layer> layers;
  std::vector<double> radii;
  std::vector<double> speeds;
};

struct MediumSpec {
  double outer_radius = 1.0;
  double epsilon = 0.01;
  double kappa = 0.3;
  double core_radius = 0.1;
  ProfileSpec profile;
  FluctuationModel fluctuation;

  // eps overrides epsilon when positive (eps ladders)
  Medium build(double eps = 0.0) const;
  // c_o constant and no fluctuation
  bool homogeneous() const;
};

struct NoiseSpec {
  RadialDensity radial{0.98, 0.995, 1.0, RadialDensity::Shape::top_hat};
  BandSpectrum spectrum{1.0, 2.0, 0.25, 0.0, std::numeric_limits<double>::infinity()};
  std::string angular = "uniform";  // uniform | hemisphere | cap
  double cap_angle = kPi / 2;

  NoiseSourceModel model() const { return {radial, spectrum}; }
  AngularDensity angular_density() const;
};

struct SourceSpec {
  BandSpectrum spectrum;
  double time_shift = 0.0;
};

struct FrequencySpec {
  double omega_min = 1.0;
  double omega_max = 3.0;
  double d_omega = 1e-3;

  FrequencyGrid grid() const { return FrequencyGrid::covering(omega_min, omega_max, d_omega); }
};

struct SynthesisSpec {
  double record_length = 200.0;
  std::size_t realizations = 20;
  // largest lag of the empirical correlations, in time units
  double max_lag = 10.0;
};

struct OracleSpec {
  std::vector<double> epsilons{0.04, 0.02, 0.01};
  std::vector<double> omegas{1.2, 1.5, 1.8, 2.1, 2.4};
  std::vector<int> ls{0, 1, 2};
  double steps_per_wavelength = 24.0;
};

struct RobustnessSpec {
  std::vector<std::string> experiments{"aperture", "weights", "perturbation", "noise"};
  int l_max = 2;
  std::size_t pairs_per_angle = 6;
  std::vector<double> epsilons{0.04, 0.02, 0.01};
  std::vector<double> omegas{1.5, 2.0};
  AngularPerturbation perturbation;
  std::vector<std::size_t> receivers{30, 60};
  BandSpectrum measurement_noise{1.0, 4.0, 0.4, 2.0, 6.0};
  std::size_t noise_realizations = 40;
  // record length of the measurement-noise study (its Nyquist band is wider)
  double noise_record_length = 100.0;
};

struct RunConfig {
  std::string origin;  // file path or "<text>"
  MediumSpec medium;
  NoiseSpec noise;
  SourceSpec source;
  bool source_spectrum_given = false;
  FrequencySpec frequency;
  int l = 1;
  int l_max = 4;
  std::vector<double> source_radii;
  SynthesisSpec synthesis;
  OracleSpec oracle;
  RobustnessSpec robustness;
  std::uint64_t seed = 1;
  int threads = 1;
  Tolerances tolerances;
  std::string output = "out";
};

// Throws ConfigError with the field path (or the line for syntax errors).
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

// Fully resolved configuration as canonical JSON text (defaults filled in).
std::string resolved_config_json(const RunConfig& config);

// Closest candidate by edit distance, or "" when nothing is close.
std::string suggest_key(const std::string& key, const std::vector<std::string>& candidates);

// Half-width at half maximum of the resonances of |1 - Gamma R|^{-2}:
// eps (1 - |Gamma|) / (2 tau(0, R_o) sqrt|Gamma|); +inf when Gamma = 0.
double resonance_half_width(const Medium& medium);

}  // namespace gadi
