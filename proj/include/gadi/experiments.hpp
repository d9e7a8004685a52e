// Numerical experiments shared by the command-line checks and the acceptance
// suite. Each routine returns the measured data; the pass rule is applied by
// the caller (run_acceptance_check holds the desk-scale thresholds).
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gadi/core.hpp"
#include "gadi/daylight.hpp"
#include "gadi/medium.hpp"
#include "gadi/oracle.hpp"
#include "gadi/robustness.hpp"
#include "gadi/scattering.hpp"

namespace gadi {

// Propagator integration at rel 1e-12 / abs 1e-15, for identities whose two
// sides differ by the energy drift of the integrator.
Tolerances tight_tolerances();

// ------------------------------------------------ energy and unitarity

// Medium number `index` of a deterministic family cycling through the
// fluctuation kinds (none, layered, random) and the profile kinds.
Medium sample_medium(std::size_t index, double epsilon, std::uint64_t seed);

struct EnergySweep {
  FrequencyGrid grid;
  std::vector<double> max_energy;      // per medium: max ||a|^2 - |b|^2 - 1|
  std::vector<double> max_unitarity;   // per medium: max ||R| - 1|
  double worst_energy = 0.0;
  double worst_unitarity = 0.0;
};

EnergySweep energy_unitarity_sweep(const std::vector<Medium>& media, const FrequencyGrid& grid,
                                   int l, const Tolerances& tol = {}, int threads = 1);

// ------------------------------------------------ homogeneous spectrum

struct PeakMatch {
  std::vector<double> found;      // peak positions
  std::vector<double> predicted;  // n pi eps c / R_o nearest to each found peak
  double worst_offset = 0.0;
};

// Compares peak positions with n pi eps c / R_o.
PeakMatch match_homogeneous_peaks(const std::vector<double>& peaks, double epsilon, double speed,
                                  double outer_radius);

// Largest |omega_oracle - n pi eps c / R_o| over the lossless roots in [lo, hi].
PeakMatch oracle_homogeneous_gap(const Medium& medium, int l, double lo, double hi);

// ------------------------------------------------ autocorrelation identity and thin annulus

struct IdentityRow {
  double omega = 0.0;
  int l = 0;
  double closed_form = 0.0;
  double brute_force = 0.0;
  double rel_error = 0.0;
};

// statistical_autocorrelation against F^ int K |H|^2 with H from explicit solves.
std::vector<IdentityRow> autocorrelation_identity(const Medium& medium, const NoiseSourceModel& noise,
                                                  const std::vector<double>& omegas,
                                                  const std::vector<int>& ls,
                                                  const Tolerances& tol, int threads = 1);

struct ThinConvergence {
  std::vector<double> thickness;
  // relative L2 gap over the grid; pointwise ratios blow up where |1 + R^| vanishes
  std::vector<double> gap;
  FrequencyGrid grid;
};

// Annuli [R_o - d_i, R_o] for each d_i in `thickness`.
ThinConvergence thin_annulus_convergence(const Medium& medium, const NoiseSourceModel& noise,
                                         const std::vector<double>& thickness,
                                         const FrequencyGrid& grid, int l, const Tolerances& tol,
                                         int threads = 1);

// ------------------------------------------------ daylight

struct DaylightSummary {
  std::vector<DaylightReport> reports;
  double min_correlation = 0.0;
  double constant_spread = 0.0;  // (max - min) / min of the fitted constants
};

DaylightSummary daylight_summary(const Medium& medium, const NoiseSourceModel& noise,
                                 const SourceTrace& source, const std::vector<int>& ls,
                                 const FrequencyGrid& grid, const std::vector<double>& times,
                                 const Tolerances& tol = {}, int threads = 1);

// ------------------------------------------------ Monte Carlo convergence

struct ConvergenceStudy {
  std::vector<double> record_lengths;
  // variance over realizations of C^T(j dt), averaged over lags j <= max_lag
  std::vector<double> variance;
  // realization mean of C^T(0) and the statistical value
  std::vector<double> mean_zero_lag;
  double statistical_zero_lag = 0.0;
  std::size_t realizations = 0;
  double slope = 0.0;
};

ConvergenceStudy variance_convergence(const Medium& medium, const NoiseSourceModel& noise, int l,
                                      const std::vector<double>& record_lengths,
                                      std::size_t realizations, double max_lag,
                                      std::uint64_t seed, const Tolerances& tol = {},
                                      int threads = 1);

// ------------------------------------------------ aperture

struct ApertureOptions {
  int l_max = 4;
  std::size_t pairs_per_angle = 6;
  double record_length = 2000.0;
  std::size_t realizations = 4;
  double max_lag = 15.0;  // time units
  // peaks of the direct spectrum above this fraction of its maximum are compared
  double peak_fraction = 0.3;
  std::uint64_t seed = 1;
};

struct ApertureStudy {
  FrequencyGrid grid;
  std::size_t receivers = 0;
  double dt = 0.0;
  std::vector<std::vector<double>> lag_values;     // per l, reconstructed C_l(j dt)
  std::vector<std::vector<double>> reconstructed;  // per l, spectrum on grid
  std::vector<std::vector<double>> direct;         // per l, statistical spectrum on grid
  std::vector<std::vector<double>> direct_peaks;   // per l, compared peak positions
  std::vector<double> worst_offset;                // per l, max distance to nearest reconstructed peak
};

ApertureStudy aperture_study(const Medium& medium, const NoiseSourceModel& noise,
                             const FrequencyGrid& grid, const ApertureOptions& options,
                             const Tolerances& tol = {}, int threads = 1);

// ------------------------------------------------ angular source weights

struct WeightStudy {
  FrequencyGrid grid;
  WeightTable weights;
  std::vector<std::vector<double>> uniform;    // per l, m-summed spectrum with G = 1
  std::vector<std::vector<double>> weighted;   // per l, m-summed spectrum with G
  std::vector<double> uniform_argmax;
  std::vector<double> weighted_argmax;
  std::vector<double> amplitude_error;         // per l, max |weighted - sum_m G C| / max |sum_m G C|
};

WeightStudy weight_study(const Medium& medium, const NoiseSourceModel& noise,
                         const AngularDensity& density, int l_max, const FrequencyGrid& grid,
                         const Tolerances& tol = {}, int threads = 1);

// ------------------------------------------------ angular perturbations

struct PerturbationScaling {
  std::vector<double> epsilons;
  std::vector<double> deviation;  // RMS over frequencies and seeds
  double slope = 0.0;
};

PerturbationScaling perturbation_scaling(const std::function<Medium(double)>& make_medium,
                                         AngularPerturbation perturbation,
                                         const std::vector<double>& epsilons,
                                         const std::vector<double>& omegas, std::size_t seeds,
                                         const Tolerances& tol = {}, int threads = 1);

// ------------------------------------------------ measurement noise

struct NoiseFloorStudy {
  std::vector<std::size_t> receivers;
  std::vector<double> measured;   // mean added lag-zero autocorrelation of the l = 0 coefficient
  std::vector<double> predicted;  // 4 pi F^n(t = 0) / N
};

// signal: mode series (ModeIndex::flat) of the clean field up to signal_l_max;
// may be empty for a pure-noise record of grid.samples samples.
NoiseFloorStudy noise_floor_study(const std::vector<std::vector<double>>& signal, int signal_l_max,
                                  const SynthesisGrid& grid, const BandSpectrum& noise,
                                  const std::vector<std::size_t>& receivers,
                                  std::size_t repetitions, std::uint64_t seed, int threads = 1);

// Synthesizes the mode series p_{l,m}, l <= l_max, of one realization
// (ModeIndex::flat order). The transfer functions depend on l only through
// the parity sign, so one table per parity is built and relabeled per l.
class ModeSynthesizer {
 public:
  ModeSynthesizer(const Medium& medium, const NoiseSourceModel& noise, const SynthesisGrid& grid,
                  int l_max, const Tolerances& tol = {}, int threads = 1);

  const SynthesisGrid& grid() const { return grid_; }
  int l_max() const { return static_cast<int>(tables_.size()) - 1; }
  const TransferTable& table(int l) const { return tables_[l]; }
  std::vector<std::vector<double>> realize(std::uint64_t seed, std::uint64_t realization,
                                           int threads = 1) const;

 private:
  SynthesisGrid grid_;
  std::vector<TransferTable> tables_;
};

// Largest frequency carrying noise power: band_hi or center + 10 widths.
double spectrum_reach(const BandSpectrum& spectrum);

// ------------------------------------------------ acceptance suite

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;  // one-line summary of the measured quantities
  double seconds = 0.0;
};

// Runs criterion `id` (1..12) at desk scale.
CheckResult run_acceptance_check(int id, int threads = 1);

}  // namespace gadi
