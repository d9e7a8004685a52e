#include "gadi/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "gadi/parallel.hpp"
#include "gadi/random.hpp"

namespace gadi {

Tolerances tight_tolerances() {
  Tolerances t;
  t.rel_tol = 1e-12;
  t.abs_tol = 1e-15;
  return t;
}

// ------------------------------------------------ energy and unitarity

Medium sample_medium(std::size_t index, double epsilon, std::uint64_t seed) {
  CounterStream rng(stream_key(seed, {static_cast<std::uint64_t>(index)}));
  SmoothProfile profile = [&] {
    switch ((index / 3) % 3) {
      case 0: return SmoothProfile::constant(1.0, 1.0);
      case 1: return SmoothProfile::piecewise_constant({{0.0, 0.5, 1.2}, {0.5, 1.0, 1.0}});
      default: return SmoothProfile::sampled({0.2, 0.5, 0.8, 1.0}, {1.4, 1.25, 1.1, 1.0});
    }
  }();
  FluctuationModel fluct;
  switch (index % 3) {
    case 0:
      fluct = FluctuationModel::none();
      break;
    case 1: {
      std::vector<Layer> layers;
      double r = 0.2;
      for (int i = 0; i < 3; ++i) {
        const double lo = r + 0.05 * rng.uniform();
        const double hi = lo + 0.05 + 0.15 * rng.uniform();
        layers.push_back({lo, hi, 0.6 * (rng.uniform() - 0.5)});
        r = hi;
      }
      fluct = FluctuationModel::layered(layers);
      break;
    }
    default:
      fluct = FluctuationModel::random(0.05 + 0.1 * rng.uniform(), 0.5 + 1.5 * rng.uniform(), 0.2,
                                       0.95, rng.next_bits());
  }
  return Medium(1.0, epsilon, 0.3, 0.1, std::move(profile), std::move(fluct));
}

EnergySweep energy_unitarity_sweep(const std::vector<Medium>& media, const FrequencyGrid& grid,
                                   int l, const Tolerances& tol, int threads) {
  EnergySweep out;
  out.grid = grid;
  for (const Medium& m : media) {
    const ScatteringSpectrum s = compute_spectrum(m, grid, l, {}, tol, threads);
    double e = 0.0, u = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      e = std::max(e, s.max_energy_residual[k]);
      u = std::max(u, std::abs(std::abs(s.reflection[k]) - 1.0));
    }
    out.max_energy.push_back(e);
    out.max_unitarity.push_back(u);
    out.worst_energy = std::max(out.worst_energy, e);
    out.worst_unitarity = std::max(out.worst_unitarity, u);
  }
  return out;
}

// ------------------------------------------------ homogeneous spectrum

PeakMatch match_homogeneous_peaks(const std::vector<double>& peaks, double epsilon, double speed,
                                  double outer_radius) {
  PeakMatch out;
  const double spacing = kPi * epsilon * speed / outer_radius;
  for (double w : peaks) {
    const double predicted = std::round(w / spacing) * spacing;
    out.found.push_back(w);
    out.predicted.push_back(predicted);
    out.worst_offset = std::max(out.worst_offset, std::abs(w - predicted));
  }
  return out;
}

PeakMatch oracle_homogeneous_gap(const Medium& medium, int l, double lo, double hi) {
  const auto roots = direct_eigenfrequencies(medium, l, lo, hi);
  return match_homogeneous_peaks(roots, medium.epsilon(), medium.surface_speed(),
                                 medium.outer_radius());
}

// ------------------------------------------------ identity and thin annulus

std::vector<IdentityRow> autocorrelation_identity(const Medium& medium, const NoiseSourceModel& noise,
                                                  const std::vector<double>& omegas,
                                                  const std::vector<int>& ls,
                                                  const Tolerances& tol, int threads) {
  std::vector<IdentityRow> rows(omegas.size() * ls.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    IdentityRow& row = rows[i];
    row.omega = omegas[i / ls.size()];
    row.l = ls[i % ls.size()];
    row.closed_form = statistical_autocorrelation(medium, noise, row.omega, row.l, tol);
    row.brute_force = transfer_autocorrelation(medium, noise, row.omega, row.l, tol);
    const double scale = std::max(std::abs(row.closed_form), std::abs(row.brute_force));
    row.rel_error = scale > 0.0 ? std::abs(row.closed_form - row.brute_force) / scale : 0.0;
  });
  return rows;
}

ThinConvergence thin_annulus_convergence(const Medium& medium, const NoiseSourceModel& noise,
                                         const std::vector<double>& thickness,
                                         const FrequencyGrid& grid, int l, const Tolerances& tol,
                                         int threads) {
  ThinConvergence out;
  out.grid = grid;
  const double ro = medium.outer_radius();
  for (double d : thickness) {
    NoiseSourceModel thin = noise;
    thin.radial.r_lo = ro - d;
    thin.radial.r_hi = ro;
    const auto stat = statistical_spectrum(medium, thin, grid, l, tol, threads);
    const auto approx = thin_annulus_spectrum(medium, thin, grid, l, tol, threads);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      num += (stat[k] - approx[k]) * (stat[k] - approx[k]);
      den += approx[k] * approx[k];
    }
    out.thickness.push_back(d);
    out.gap.push_back(den > 0.0 ? std::sqrt(num / den) : 0.0);
  }
  return out;
}

// ------------------------------------------------ daylight

DaylightSummary daylight_summary(const Medium& medium, const NoiseSourceModel& noise,
                                 const SourceTrace& source, const std::vector<int>& ls,
                                 const FrequencyGrid& grid, const std::vector<double>& times,
                                 const Tolerances& tol, int threads) {
  DaylightSummary out;
  out.min_correlation = 1.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int l : ls) {
    out.reports.push_back(daylight_identity_check(medium, noise, source, l, grid, times, tol, threads));
    const DaylightReport& r = out.reports.back();
    out.min_correlation = std::min(out.min_correlation, r.correlation);
    lo = std::min(lo, r.fitted_constant);
    hi = std::max(hi, r.fitted_constant);
  }
  out.constant_spread = ls.empty() ? 0.0 : (hi - lo) / std::abs(lo);
  return out;
}

// ------------------------------------------------ synthesis helpers

double spectrum_reach(const BandSpectrum& s) {
  return std::min(s.band_hi, s.center + 10.0 * s.width);
}

ModeSynthesizer::ModeSynthesizer(const Medium& medium, const NoiseSourceModel& noise,
                                 const SynthesisGrid& grid, int l_max, const Tolerances& tol,
                                 int threads)
    : grid_(grid) {
  if (l_max < 0) throw DomainError("mode synthesis: l_max must be >= 0");
  const TransferTable even = build_transfer_table(medium, noise, grid, 0, tol, threads);
  const TransferTable odd = l_max >= 1 ? build_transfer_table(medium, noise, grid, 1, tol, threads)
                                       : even;
  for (int l = 0; l <= l_max; ++l) {
    tables_.push_back(l % 2 == 0 ? even : odd);
    tables_.back().l = l;
  }
}

std::vector<std::vector<double>> ModeSynthesizer::realize(std::uint64_t seed,
                                                          std::uint64_t realization,
                                                          int threads) const {
  const int n = ModeIndex::count(l_max());
  std::vector<std::vector<double>> modes(static_cast<std::size_t>(n));
  parallel_for(modes.size(), threads, [&](std::size_t i) {
    const ModeIndex mode = ModeIndex::from_flat(static_cast<int>(i));
    modes[i] = synthesize_recordings(tables_[mode.l], mode.m, seed, realization);
  });
  return modes;
}

// ------------------------------------------------ Monte Carlo convergence

ConvergenceStudy variance_convergence(const Medium& medium, const NoiseSourceModel& noise, int l,
                                      const std::vector<double>& record_lengths,
                                      std::size_t realizations, double max_lag,
                                      std::uint64_t seed, const Tolerances& tol, int threads) {
  if (realizations < 2) throw ConfigError("convergence study: need at least two realizations");
  if (record_lengths.size() < 2) throw ConfigError("convergence study: need at least two record lengths");
  ConvergenceStudy out;
  out.record_lengths = record_lengths;
  out.realizations = realizations;
  const double reach = spectrum_reach(noise.spectrum);
  for (std::size_t t = 0; t < record_lengths.size(); ++t) {
    const double T = record_lengths[t];
    if (!(T > max_lag)) throw ConfigError("convergence study: record length must exceed max_lag");
    const SynthesisGrid grid = make_synthesis_grid(medium.epsilon(), T + max_lag, reach);
    const TransferTable table = build_transfer_table(medium, noise, grid, l, tol, threads);
    const double dt = grid.dt();
    const auto lags = static_cast<std::size_t>(std::floor(max_lag / dt));
    const auto window = std::min(static_cast<std::size_t>(std::llround(T / dt)), grid.samples - lags);
    std::vector<std::vector<double>> c(realizations);
    parallel_for(realizations, threads, [&](std::size_t r) {
      const auto series = synthesize_recordings(table, 0, seed, r);
      c[r] = empirical_cross_correlation(series, series, window, lags);
    });
    double var = 0.0, mean0 = 0.0;
    for (std::size_t j = 0; j <= lags; ++j) {
      double m = 0.0, q = 0.0;
      for (const auto& row : c) m += row[j];
      m /= static_cast<double>(realizations);
      for (const auto& row : c) q += (row[j] - m) * (row[j] - m);
      var += q / static_cast<double>(realizations - 1);
      if (j == 0) mean0 = m;
    }
    out.variance.push_back(var / static_cast<double>(lags + 1));
    out.mean_zero_lag.push_back(mean0);
    if (t == 0) {
      double acc = 0.0;
      for (double e : table.expected) acc += e;
      out.statistical_zero_lag = acc * grid.d_omega() / kPi;
    }
  }
  out.slope = loglog_slope(out.record_lengths, out.variance);
  return out;
}

// ------------------------------------------------ aperture

namespace {

std::vector<double> significant_peaks(const FrequencyGrid& grid, const std::vector<double>& values,
                                      double fraction) {
  const double top = *std::max_element(values.begin(), values.end());
  std::vector<double> out;
  for (const SpectralPeak& p : find_peaks(grid, values, false))
    if (p.value >= fraction * top) out.push_back(p.omega);
  return out;
}

}  // namespace

ApertureStudy aperture_study(const Medium& medium, const NoiseSourceModel& noise,
                             const FrequencyGrid& grid, const ApertureOptions& o,
                             const Tolerances& tol, int threads) {
  if (o.realizations < 1) throw ConfigError("aperture study: need at least one realization");
  const SynthesisGrid sgrid =
      make_synthesis_grid(medium.epsilon(), o.record_length, spectrum_reach(noise.spectrum));
  const ModeSynthesizer synth(medium, noise, sgrid, o.l_max, tol, threads);
  const PairLayout layout = node_targeted_pairs(pair_angle_rule(o.l_max), o.pairs_per_angle, o.seed);
  const double dt = sgrid.dt();
  const auto lags = static_cast<std::size_t>(std::floor(o.max_lag / dt));
  if (lags + 1 >= sgrid.samples) throw ConfigError("aperture study: max_lag exceeds the record");
  const std::size_t window = sgrid.samples - lags;

  AnglePairCovariance cov;
  for (std::size_t r = 0; r < o.realizations; ++r) {
    const auto modes = synth.realize(o.seed, r, threads);
    const auto field = field_at_receivers(modes, o.l_max, layout.receivers);
    const AnglePairCovariance one = estimate_pair_covariance(layout, field, dt, window, lags);
    if (r == 0) {
      cov = one;
    } else {
      cov.values += one.values;
      cov.realizations += one.realizations;
    }
  }
  cov.values /= static_cast<double>(o.realizations);

  ApertureStudy out;
  out.grid = grid;
  out.receivers = layout.receivers.size();
  out.dt = dt;
  for (int l = 0; l <= o.l_max; ++l) {
    auto c = reconstruct_Cl_from_pairs(cov, l);
    for (double& v : c) v *= pair_to_mode_factor(l);
    out.reconstructed.push_back(lag_spectrum(c, dt, medium.epsilon(), grid));
    out.lag_values.push_back(std::move(c));
    out.direct.push_back(statistical_spectrum(medium, noise, grid, l, tol, threads));
    out.direct_peaks.push_back(significant_peaks(grid, out.direct.back(), o.peak_fraction));
    std::vector<double> rec;
    for (const SpectralPeak& p : find_peaks(grid, out.reconstructed.back(), false)) rec.push_back(p.omega);
    double worst = out.direct_peaks.back().empty() ? std::numeric_limits<double>::infinity() : 0.0;
    for (double w : out.direct_peaks.back()) {
      double best = std::numeric_limits<double>::infinity();
      for (double v : rec) best = std::min(best, std::abs(v - w));
      worst = std::max(worst, best);
    }
    out.worst_offset.push_back(worst);
  }
  return out;
}

// ------------------------------------------------ angular source weights

WeightStudy weight_study(const Medium& medium, const NoiseSourceModel& noise,
                         const AngularDensity& density, int l_max, const FrequencyGrid& grid,
                         const Tolerances& tol, int threads) {
  WeightStudy out;
  out.grid = grid;
  const AngularGrid agrid(96, 192);
  out.weights = angular_weights(density, l_max, agrid);
  const WeightTable ones = angular_weights([](double, double) { return 1.0; }, l_max, agrid);

  std::vector<CorrelationRecord> records;
  std::vector<std::vector<double>> spectra;
  for (int l = 0; l <= l_max; ++l) {
    spectra.push_back(statistical_spectrum(medium, noise, grid, l, tol, threads));
    for (int m = -l; m <= l; ++m) {
      CorrelationRecord r;
      r.l = l;
      r.m = m;
      r.provenance = "statistical";
      r.epsilon = medium.epsilon();
      r.grid = grid;
      r.spectrum = spectra.back();
      r.realizations = 1;
      records.push_back(std::move(r));
    }
  }
  const WeightedRecords uni = apply_angular_weights(records, ones);
  const WeightedRecords wtd = apply_angular_weights(records, out.weights);
  auto argmax = [&](const std::vector<double>& v) {
    return grid[static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin())];
  };
  for (int l = 0; l <= l_max; ++l) {
    out.uniform.push_back(uni.m_summed[l].spectrum);
    out.weighted.push_back(wtd.m_summed[l].spectrum);
    out.uniform_argmax.push_back(argmax(out.uniform.back()));
    out.weighted_argmax.push_back(argmax(out.weighted.back()));
    const double g = out.weights.degree_sum(l);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      err = std::max(err, std::abs(out.weighted.back()[k] - g * spectra[l][k]));
      scale = std::max(scale, std::abs(g * spectra[l][k]));
    }
    out.amplitude_error.push_back(scale > 0.0 ? err / scale : err);
  }
  return out;
}

// ------------------------------------------------ angular perturbations

PerturbationScaling perturbation_scaling(const std::function<Medium(double)>& make_medium,
                                         AngularPerturbation perturbation,
                                         const std::vector<double>& epsilons,
                                         const std::vector<double>& omegas, std::size_t seeds,
                                         const Tolerances& tol, int threads) {
  if (seeds < 1 || omegas.empty()) throw ConfigError("perturbation scaling: need frequencies and seeds");
  PerturbationScaling out;
  out.epsilons = epsilons;
  const std::uint64_t base = perturbation.seed;
  for (double eps : epsilons) {
    const Medium medium = make_medium(eps);
    std::vector<double> d(omegas.size() * seeds);
    parallel_for(d.size(), threads, [&](std::size_t i) {
      AngularPerturbation p = perturbation;
      p.seed = base + i % seeds;
      const double w = omegas[i / seeds];
      d[i] = coupled_deviation(coupled_mode_integrate(medium, p, w, tol), medium, tol);
    });
    double acc = 0.0;
    for (double v : d) acc += v * v;
    out.deviation.push_back(std::sqrt(acc / static_cast<double>(d.size())));
  }
  out.slope = loglog_slope(out.epsilons, out.deviation);
  return out;
}

// ------------------------------------------------ measurement noise

NoiseFloorStudy noise_floor_study(const std::vector<std::vector<double>>& signal, int signal_l_max,
                                  const SynthesisGrid& grid, const BandSpectrum& noise,
                                  const std::vector<std::size_t>& receivers,
                                  std::size_t repetitions, std::uint64_t seed, int threads) {
  if (repetitions < 1) throw ConfigError("noise floor study: need at least one repetition");
  NoiseFloorStudy out;
  const std::size_t n = grid.samples;
  for (std::size_t count : receivers) {
    const auto points = uniform_receivers(count, stream_key(seed, {count}));
    const auto clean = signal.empty() ? std::vector<std::vector<double>>(count, std::vector<double>(n, 0.0))
                                      : field_at_receivers(signal, signal_l_max, points);
    const auto clean_coeff = project_receivers(clean, points, 0, 0);
    const double clean_ac = empirical_cross_correlation(clean_coeff, clean_coeff, n - 1, 0)[0];
    std::vector<double> added(repetitions);
    parallel_for(repetitions, threads, [&](std::size_t r) {
      const auto noisy = inject_measurement_noise(clean, grid, noise, stream_key(seed, {count, r, 1}));
      const auto coeff = project_receivers(noisy, points, 0, 0);
      added[r] = empirical_cross_correlation(coeff, coeff, n - 1, 0)[0] - clean_ac;
    });
    double mean = 0.0;
    for (double a : added) mean += a / static_cast<double>(repetitions);
    out.receivers.push_back(count);
    out.measured.push_back(mean);
    out.predicted.push_back(noise_floor_lags(count, noise, grid.epsilon, grid.dt(), 0)[0]);
  }
  return out;
}

// ------------------------------------------------ acceptance suite

namespace {

Medium layered_random(double eps, std::uint64_t seed, double kappa = 0.3) {
  return Medium(1.0, eps, kappa, 0.1,
                SmoothProfile::piecewise_constant({{0.0, 0.5, 1.2}, {0.5, 1.0, 1.0}}),
                FluctuationModel::random(0.12, 1.0, 0.2, 0.97, seed));
}

Medium quiet_medium(double eps) {
  return Medium(1.0, eps, 0.3, 0.1,
                SmoothProfile::piecewise_constant({{0.0, 0.5, 1.2}, {0.5, 1.0, 1.0}}),
                FluctuationModel::none());
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::string list(const std::vector<double>& v, int digits = 3) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], digits);
  return s + "]";
}

const EnergySweep& shared_sweep(int threads) {
  static std::optional<EnergySweep> sweep;
  if (!sweep) {
    std::vector<Medium> media;
    for (std::size_t i = 0; i < 100; ++i) media.push_back(sample_medium(i, 0.01, 7));
    sweep = energy_unitarity_sweep(media, FrequencyGrid::covering(0.5, 4.0, 3.5 / 199.0), 1, {}, threads);
  }
  return *sweep;
}

CheckResult check_energy(int threads) {
  const EnergySweep& s = shared_sweep(threads);
  return {1, "energy conservation over 100 media x 200 frequencies", s.worst_energy <= 1e-8,
          "max ||a|^2-|b|^2-1| = " + fmt(s.worst_energy) + " (bound 1e-8, " +
              std::to_string(s.grid.size()) + " frequencies)"};
}

CheckResult check_unitarity(int threads) {
  const EnergySweep& s = shared_sweep(threads);
  return {2, "unit modulus of the reflection function", s.worst_unitarity <= 1e-8,
          "max ||R|-1| = " + fmt(s.worst_unitarity) + " (bound 1e-8)"};
}

CheckResult check_homogeneous(int threads) {
  const double eps = 0.01, kc = 0.02, dw = 5e-5;
  const Medium m(1.0, eps, kc, 0.1, SmoothProfile::constant(1.0, 1.0), FluctuationModel::none());
  const FrequencyGrid grid = FrequencyGrid::covering(1.0, 1.5, dw);
  std::vector<double> peaks;
  for (const SpectralPeak& p : eigenfrequency_scan(m, grid, 1, {}, threads)) peaks.push_back(p.omega);
  const PeakMatch scan = match_homogeneous_peaks(peaks, eps, 1.0, 1.0);
  std::vector<double> gaps;
  const std::vector<double> ladder{0.02, 0.01};
  for (double e : ladder) {
    const Medium lossless(1.0, e, 0.0, 0.1, SmoothProfile::constant(1.0, 1.0), FluctuationModel::none());
    gaps.push_back(oracle_homogeneous_gap(lossless, 1, 1.0, 1.5).worst_offset);
  }
  const bool ok = peaks.size() >= 10 && scan.worst_offset <= 0.5 * dw && gaps[1] <= 0.6 * gaps[0] &&
                  gaps[0] <= ladder[0] && gaps[1] <= ladder[1];
  return {3, "homogeneous-sphere spectrum at n pi eps c / R", ok,
          std::to_string(peaks.size()) + " peaks, worst offset " + fmt(scan.worst_offset) +
              " (bound " + fmt(0.5 * dw) + "); oracle gap at eps " + list(ladder) + " = " + list(gaps) +
              " (needs <= eps and halving)"};
}

CheckResult check_wkb(int threads) {
  std::vector<double> omegas;
  for (int k = 0; k < 20; ++k) omegas.push_back(2.0 + k / 19.0);
  const std::vector<MediumFactory> media{
      [](double e) {
        return Medium(1.0, e, 0.5, 0.1, SmoothProfile::constant(1.0, 1.0), FluctuationModel::none());
      },
      [](double e) {
        return Medium(1.0, e, 0.5, 0.2, SmoothProfile::sampled({0.2, 0.5, 0.8, 1.0}, {1.4, 1.25, 1.1, 1.0}),
                      FluctuationModel::none());
      },
      [](double e) {
        return Medium(1.0, e, 0.5, 0.2, SmoothProfile::sampled({0.2, 0.5, 0.8, 1.0}, {1.4, 1.25, 1.1, 1.0}),
                      FluctuationModel::random(0.15, 1.0, 0.3, 0.9, 4));
      }};
  std::vector<double> orders;
  for (const auto& make : media)
    orders.push_back(wkb_error_report(make, omegas, {0, 1, 2}, {0.04, 0.02, 0.01}, threads).fitted_order);
  const bool ok = std::all_of(orders.begin(), orders.end(), [](double o) { return o >= 0.7; });
  return {4, "WKB response vs exact radial solve is O(eps)", ok,
          "fitted orders " + list(orders) + " for 3 media, 20 frequencies, l = 0..2 (bound >= 0.7)"};
}

CheckResult check_identity(int threads) {
  const Medium m = layered_random(0.01, 17);
  NoiseSourceModel noise;
  noise.radial = {0.85, 0.95, 1.0, RadialDensity::Shape::smooth};
  noise.spectrum = BandSpectrum{1.0, 2.0, 0.3};
  std::vector<double> omegas;
  for (int k = 0; k < 12; ++k) omegas.push_back(1.5 + k / 11.0);
  const auto rows = autocorrelation_identity(m, noise, omegas, {0, 1, 2, 3, 4}, tight_tolerances(), threads);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.rel_error);
  return {5, "autocorrelation closed form equals F int K |H|^2", worst <= 1e-10,
          "max relative difference " + fmt(worst) + " over " + std::to_string(rows.size()) +
              " (omega, l) cells (bound 1e-10)"};
}

CheckResult check_thin(int threads) {
  const double eps = 0.01, w_max = 2.5;
  const Medium m = layered_random(eps, 17);
  NoiseSourceModel noise;
  noise.spectrum = BandSpectrum{1.0, 2.0, 0.3};
  const double d = 0.1 * eps * m.surface_speed() / w_max;
  Tolerances tol;
  // slack for the rounding of R_o - (R_o - d) at omega_max
  tol.wavelength_fraction = 0.1 * (1.0 + 1e-9);
  const auto conv = thin_annulus_convergence(m, noise, {d, d / 2}, FrequencyGrid::covering(1.5, w_max, 0.02),
                                             1, tol, threads);
  const double ratio = conv.gap[1] / conv.gap[0];
  const double c = w_max / (eps * m.surface_speed());
  const bool ok = conv.gap[0] <= c * d && conv.gap[1] <= c * d / 2 && ratio >= 0.35 && ratio <= 0.65;
  return {6, "thin-annulus limit converges linearly in the thickness", ok,
          "gap at d = " + fmt(d) + ", d/2: " + list(conv.gap) + ", ratio " + fmt(ratio) +
              " (needs 0.5 +- 0.15 and gap <= d omega_max / (eps c))"};
}

CheckResult check_daylight(int threads) {
  const double eps = 0.01;
  const Medium m = layered_random(eps, 17);
  const BandSpectrum band{1.0, 2.0, 0.15, 1.4, 2.6};
  NoiseSourceModel noise;
  noise.radial = {1.0 - 2e-4, 1.0 - 2e-6, 1.0, RadialDensity::Shape::top_hat};
  noise.spectrum = band;
  const SourceTrace pulse(eps, band, HarmonicTable(4));
  std::vector<double> times;
  for (int j = 1; j <= 200; ++j) times.push_back(0.01 * j);
  const DaylightSummary s = daylight_summary(m, noise, pulse, {0, 1, 2, 3, 4},
                                             FrequencyGrid::covering(1.4, 2.6, 2e-4), times, {}, threads);
  const bool ok = s.min_correlation >= 0.99 && s.constant_spread <= 0.05;
  return {7, "daylight identity dC/dt proportional to p_sym", ok,
          "min correlation " + fmt(s.min_correlation, 6) + " (bound 0.99), constant spread " +
              fmt(s.constant_spread) + " over l = 0..4 (bound 0.05)"};
}

NoiseSourceModel synthesis_noise() {
  NoiseSourceModel noise;
  noise.radial = {0.9, 0.95, 1.0, RadialDensity::Shape::top_hat};
  noise.spectrum = BandSpectrum{1.0, 2.0, 0.15, 1.4, 2.6};
  return noise;
}

CheckResult check_convergence(int threads) {
  const Medium m = layered_random(0.05, 17);
  const ConvergenceStudy s =
      variance_convergence(m, synthesis_noise(), 1, {40, 80, 160, 320}, 200, 2.0, 8, {}, threads);
  const bool ok = std::abs(s.slope + 1.0) <= 0.2;
  return {8, "empirical autocorrelation variance decays like 1/T", ok,
          "slope " + fmt(s.slope) + " over T = " + list(s.record_lengths) + " with " +
              std::to_string(s.realizations) + " realizations (needs -1 +- 0.2)"};
}

CheckResult check_aperture(int threads) {
  const Medium m = layered_random(0.05, 17);
  const FrequencyGrid grid = FrequencyGrid::covering(1.45, 2.55, 0.005);
  ApertureOptions o;
  // the l = 0 estimate carries the variance of all modes; 4 records leave its
  // weakest compared peak at the edge of the bound, 64 put it at ~0.3 dw
  o.realizations = 64;
  const ApertureStudy s = aperture_study(m, synthesis_noise(), grid, o, {}, threads);
  const double worst = *std::max_element(s.worst_offset.begin(), s.worst_offset.end());
  std::size_t compared = 0;
  for (const auto& p : s.direct_peaks) compared += p.size();
  return {9, "C_l peaks from angle-pair covariances match the direct spectrum", worst <= grid.spacing(),
          std::to_string(compared) + " peaks over l = 0..4 from " + std::to_string(s.receivers) +
              " receivers, worst offset " + fmt(worst) + " (bound " + fmt(grid.spacing()) + ")"};
}

CheckResult check_weights(int threads) {
  const Medium m = layered_random(0.01, 17);
  NoiseSourceModel noise;
  noise.radial = {0.85, 0.95, 1.0, RadialDensity::Shape::smooth};
  noise.spectrum = BandSpectrum{1.0, 2.0, 0.3};
  const FrequencyGrid grid = FrequencyGrid::covering(1.5, 2.5, 1e-3);
  const WeightStudy s = weight_study(
      m, noise, [](double theta, double) { return theta <= kPi / 2 ? 1.0 : 0.0; }, 4, grid, {}, threads);
  double shift = 0.0, amp = 0.0;
  for (std::size_t l = 0; l < s.uniform_argmax.size(); ++l) {
    shift = std::max(shift, std::abs(s.uniform_argmax[l] - s.weighted_argmax[l]));
    amp = std::max(amp, s.amplitude_error[l]);
  }
  const bool ok = shift <= grid.spacing() && amp <= 1e-8;
  return {10, "hemispherical sources keep peaks and scale by sum_m G", ok,
          "max argmax shift " + fmt(shift) + " (bound " + fmt(grid.spacing()) +
              "), max amplitude error " + fmt(amp) + " (bound 1e-8)"};
}

CheckResult check_perturbation(int threads) {
  const std::vector<double> eps{0.04, 0.02, 0.01};
  const std::vector<double> omegas{1.5, 2.0};
  std::vector<double> slopes;
  bool ok = true;
  for (double a : {1.5, 2.0}) {
    AngularPerturbation p;
    p.smooth = {1.0, a, 2, 0, 1.0};
    const double s = perturbation_scaling(quiet_medium, p, eps, omegas, 1, {}, threads).slope;
    slopes.push_back(s);
    ok = ok && std::abs(s - (a - 1.0)) <= 0.2;
  }
  AngularPerturbation mix;
  mix.mixing = {1.0, 0.5, 2, 0, 1.0};
  mix.seed = 1;
  // single (omega, seed) deviations of the random mixing field scatter by ~2x; average 24 of them
  const double sc = perturbation_scaling(quiet_medium, mix, eps, {1.5, 1.8, 2.0}, 8, {}, threads).slope;
  ok = ok && sc > 0.0;
  return {11, "angular perturbation effects vanish as eps -> 0", ok,
          "slopes for a = 1.5, 2: " + list(slopes) + " (need a - 1 +- 0.2); mixing c = 0.5 slope " +
              fmt(sc) + " (needs > 0), l_max = 2"};
}

CheckResult check_noise(int threads) {
  const Medium m = layered_random(0.05, 17);
  const BandSpectrum measurement{1.0, 4.0, 0.4, 2.0, 6.0};
  const SynthesisGrid grid = make_synthesis_grid(0.05, 100.0, 6.0);
  const ModeSynthesizer synth(m, synthesis_noise(), grid, 2, {}, threads);
  const auto signal = synth.realize(3, 0, threads);
  const NoiseFloorStudy s = noise_floor_study(signal, 2, grid, measurement, {60, 120}, 40, 5, threads);
  const double ratio = s.measured[0] / s.measured[1];
  return {12, "measurement-noise floor scales like 1/N", std::abs(ratio - 2.0) <= 0.4,
          "contamination at N = 60, 120: " + list(s.measured) + " (predicted " + list(s.predicted) +
              "), ratio " + fmt(ratio) + " (needs 2 +- 20%)"};
}

}  // namespace

CheckResult run_acceptance_check(int id, int threads) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  switch (id) {
    case 1: r = check_energy(threads); break;
    case 2: r = check_unitarity(threads); break;
    case 3: r = check_homogeneous(threads); break;
    case 4: r = check_wkb(threads); break;
    case 5: r = check_identity(threads); break;
    case 6: r = check_thin(threads); break;
    case 7: r = check_daylight(threads); break;
    case 8: r = check_convergence(threads); break;
    case 9: r = check_aperture(threads); break;
    case 10: r = check_weights(threads); break;
    case 11: r = check_perturbation(threads); break;
    case 12: r = check_noise(threads); break;
    default: throw DomainError("acceptance: criterion id must lie in 1..12");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace gadi
