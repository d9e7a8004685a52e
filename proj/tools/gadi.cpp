// Command-line front end: one subcommand per experiment.
//
//   gadi <subcommand> --config <path> [--out <dir>] [--seed <u64>] [--threads <n>] [--check]
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 numerical failure, 4 check failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gadi/config.hpp"
#include "gadi/experiments.hpp"
#include "gadi/io.hpp"
#include "gadi/oracle.hpp"
#include "gadi/scattering.hpp"

using namespace gadi;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3, kCheckFailed = 4 };

Json grid_json(const FrequencyGrid& g) {
  return {{"omega_min", g.front()}, {"d_omega", g.spacing()}, {"count", g.size()}};
}

// Collects artifacts and check results of one run; writes run.json at the end.
class Run {
 public:
  Run(RunConfig config, std::string subcommand, bool check)
      : config_(std::move(config)), subcommand_(std::move(subcommand)), check_(check) {}

  const RunConfig& config() const { return config_; }
  bool checking() const { return check_; }
  int threads() const { return config_.threads; }

  void begin() {
    ensure_directory(config_.output);
    write_text(config_.output + "/config.resolved.json", resolved_config_json(config_) + "\n");
  }

  void table(const std::string& name, const CsvTable& t, Sidecar s) {
    s.subcommand = subcommand_;
    s.artifact = name;
    s.columns = t.columns;
    write_csv(config_.output + "/" + name, t);
    write_sidecar(config_.output, config_, s);
    artifacts_.push_back(name);
  }

  void check(const std::string& name, bool passed, const std::string& detail) {
    checks_.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    std::printf("%s %s: %s\n", passed ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    failed_ = failed_ || !passed;
  }

  bool failed() const { return failed_; }

  void finish(const std::string& status, const std::string& error = "") {
    Json j;
    j["subcommand"] = subcommand_;
    j["status"] = status;
    j["version"] = GADI_VERSION;
    j["config_hash"] = config_hash(config_);
    j["seed"] = config_.seed;
    j["artifacts"] = artifacts_;
    j["checks"] = checks_;
    if (!error.empty()) j["error"] = error;
    try {
      ensure_directory(config_.output);
      write_text(config_.output + "/run.json", j.dump(2) + "\n");
    } catch (const std::exception&) {
      // the original failure is more informative than a failed manifest write
    }
  }

 private:
  RunConfig config_;
  std::string subcommand_;
  bool check_;
  bool failed_ = false;
  std::vector<std::string> artifacts_;
  Json checks_ = Json::array();
};

std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

// C(t) = (1/pi) int_0^inf C^(w) cos(w t / eps) dw by the trapezoid rule on the grid.
double cosine_transform(const FrequencyGrid& g, const std::vector<double>& values, double t, double eps) {
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = (k == 0 || k + 1 == g.size()) ? 0.5 : 1.0;
    acc += w * values[k] * std::cos(g[k] * t / eps);
  }
  return acc * g.spacing() / kPi;
}

// p(t) = (1/pi) Re int_0^inf p^(w) e^{-i w t / eps} dw for a real signal.
double inverse_transform(const FrequencyGrid& g, const std::vector<Complex>& values, double t, double eps) {
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = (k == 0 || k + 1 == g.size()) ? 0.5 : 1.0;
    acc += w * std::real(values[k] * std::polar(1.0, -g[k] * t / eps));
  }
  return acc * g.spacing() / kPi;
}

std::vector<double> lag_times(const RunConfig& c) {
  // resolve the fastest oscillation of the frequency grid with 8 points
  const double dt = 2.0 * kPi * c.medium.epsilon / (8.0 * c.frequency.omega_max);
  const auto n = static_cast<std::size_t>(std::ceil(c.synthesis.max_lag / dt));
  std::vector<double> t(n + 1);
  for (std::size_t j = 0; j <= n; ++j) t[j] = static_cast<double>(j) * dt;
  return t;
}

HarmonicTable unit_angular(int l_max) {
  HarmonicTable g(l_max);
  g.values.setOnes();
  return g;
}

// ------------------------------------------------------------ subcommands

void run_scatter(Run& run) {
  const RunConfig& c = run.config();
  const Medium medium = c.medium.build();
  const FrequencyGrid grid = c.frequency.grid();
  const ScatteringSpectrum s = compute_spectrum(medium, grid, c.l, c.source_radii, c.tolerances, c.threads);
  CsvTable t{{"omega", "reflection_re", "reflection_im", "reflection_abs", "scattering_operator",
              "energy_residual"}, {}};
  double worst_e = 0.0, worst_u = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex r = s.reflection[k];
    t.add({grid[k], r.real(), r.imag(), std::abs(r), s.operator_value[k], s.max_energy_residual[k]});
    worst_e = std::max(worst_e, s.max_energy_residual[k]);
    worst_u = std::max(worst_u, std::abs(std::abs(r) - 1.0));
  }
  Sidecar sc;
  sc.description = "fundamental reflection function and scattering operator |1+R|^2/|1-Gamma R|^2";
  sc.provenance = "wkb";
  sc.grid = grid_json(grid);
  sc.extra = {{"l", c.l}, {"gamma", s.gamma}};
  run.table("scattering.csv", t, sc);

  if (!c.source_radii.empty()) {
    CsvTable f{{"omega", "source_radius", "s_re", "s_im", "t_re", "t_im"}, {}};
    for (std::size_t k = 0; k < grid.size(); ++k)
      for (std::size_t j = 0; j < c.source_radii.size(); ++j)
        f.add({grid[k], c.source_radii[j], s.s_hat[k][j].real(), s.s_hat[k][j].imag(),
               s.t_hat[k][j].real(), s.t_hat[k][j].imag()});
    Sidecar fs;
    fs.description = "source factors S^ and T^ per source radius";
    fs.provenance = "wkb";
    fs.grid = grid_json(grid);
    fs.extra = {{"l", c.l}, {"source_radii", c.source_radii}};
    run.table("source_factors.csv", f, fs);
  }
  if (run.checking()) {
    run.check("energy conservation", worst_e <= 1e-8, "max ||a|^2-|b|^2-1| = " + num(worst_e) + " (bound 1e-8)");
    run.check("unit modulus", worst_u <= 1e-8, "max ||R|-1| = " + num(worst_u) + " (bound 1e-8)");
  }
}

void run_respond(Run& run) {
  const RunConfig& c = run.config();
  const Medium medium = c.medium.build();
  const FrequencyGrid grid = c.frequency.grid();
  const SourceTrace source(c.medium.epsilon, c.source.spectrum, unit_angular(c.l), c.source.time_shift);
  const bool even = source.is_even();
  std::vector<Complex> p(grid.size()), ps(grid.size());
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    p[k] = point_source_response(medium, source, grid[k], c.l, 0, c.tolerances);
    if (even) {
      ps[k] = symmetrized_response(medium, source, grid[k], c.l, 0, c.tolerances);
      worst = std::max(worst, std::abs(ps[k] - (p[k] - std::conj(p[k]))));
      scale = std::max(scale, std::abs(ps[k]));
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CsvTable t{{"omega", "p_re", "p_im", "p_sym_re", "p_sym_im"}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k)
    t.add({grid[k], p[k].real(), p[k].imag(), even ? ps[k].real() : nan, even ? ps[k].imag() : nan});
  Sidecar sc;
  sc.description = "surface response p^_{l,0}(omega) to the point source and its symmetrized part (nan when the pulse is not even)";
  sc.provenance = "wkb";
  sc.grid = grid_json(grid);
  sc.extra = {{"l", c.l}, {"m", 0}, {"angular_coefficient", 1.0}, {"time_shift", c.source.time_shift}};
  run.table("response.csv", t, sc);

  CsvTable tt{{"t", "p", "p_sym"}, {}};
  for (double time : lag_times(c)) {
    const double a = inverse_transform(grid, p, time, c.medium.epsilon);
    tt.add({time, a, even ? a - inverse_transform(grid, p, -time, c.medium.epsilon) : nan});
  }
  Sidecar st;
  st.description = "time traces p(t) and p_sym(t) = p(t) - p(-t) by the trapezoid rule on the frequency grid";
  st.provenance = "wkb";
  st.grid = grid_json(grid);
  st.extra = {{"l", c.l}, {"m", 0}};
  run.table("response_time.csv", tt, st);

  if (run.checking()) {
    if (!even)
      run.check("symmetrized response", false, "pulse is shifted; the symmetrized identity needs an even pulse");
    else
      run.check("symmetrized response", worst <= 1e-10 * std::max(scale, 1e-300),
                "max |p_sym - (p - conj p)| = " + num(worst) + " relative to " + num(scale));
  }
}

void run_correlate(Run& run) {
  const RunConfig& c = run.config();
  const Medium medium = c.medium.build();
  const NoiseSourceModel noise = c.noise.model();
  const FrequencyGrid grid = c.frequency.grid();
  std::vector<std::vector<double>> spec;
  for (int l = 0; l <= c.l_max; ++l)
    spec.push_back(statistical_spectrum(medium, noise, grid, l, c.tolerances, c.threads));

  CsvTable t{{"omega"}, {}};
  for (int l = 0; l <= c.l_max; ++l) t.columns.push_back("C_" + std::to_string(l));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid[k]};
    for (const auto& s : spec) row.push_back(s[k]);
    t.add(row);
  }
  Sidecar sc;
  sc.description = "statistical autocorrelation spectra C^_l(omega), one column per l";
  sc.provenance = "statistical";
  sc.grid = grid_json(grid);
  sc.extra = {{"l_max", c.l_max}};
  run.table("correlation_spectrum.csv", t, sc);

  CsvTable lt{t.columns, {}};
  lt.columns[0] = "t";
  for (double time : lag_times(c)) {
    std::vector<double> row{time};
    for (const auto& s : spec) row.push_back(cosine_transform(grid, s, time, c.medium.epsilon));
    lt.add(row);
  }
  Sidecar sl;
  sl.description = "statistical autocorrelations C_l(t) = (1/pi) int C^_l cos(w t / eps) dw (trapezoid on the grid)";
  sl.provenance = "statistical";
  sl.grid = grid_json(grid);
  run.table("correlation_lags.csv", lt, sl);

  const double limit = c.tolerances.wavelength_fraction * c.medium.epsilon * medium.surface_speed() /
                       c.frequency.omega_max;
  const bool thin = noise.radial.thickness() <= limit;
  double gap = std::numeric_limits<double>::quiet_NaN();
  if (thin) {
    const auto approx = thin_annulus_spectrum(medium, noise, grid, c.l, c.tolerances, c.threads);
    CsvTable th{{"omega", "C_statistical", "C_thin_annulus"}, {}};
    double num2 = 0.0, den = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      th.add({grid[k], spec[c.l][k], approx[k]});
      num2 += (spec[c.l][k] - approx[k]) * (spec[c.l][k] - approx[k]);
      den += approx[k] * approx[k];
    }
    gap = den > 0.0 ? std::sqrt(num2 / den) : 0.0;
    Sidecar st;
    st.description = "statistical autocorrelation against the thin-annulus limit for degree l";
    st.provenance = "thin-annulus";
    st.grid = grid_json(grid);
    st.extra = {{"l", c.l}, {"thickness", noise.radial.thickness()}, {"relative_l2_gap", gap}};
    run.table("thin_annulus.csv", th, st);
  }

  if (run.checking()) {
    std::vector<double> omegas;
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 12);
    for (std::size_t k = 0; k < grid.size(); k += stride)
      if (noise.spectrum(grid[k]) > 0.0) omegas.push_back(grid[k]);
    Tolerances tight = tight_tolerances();
    tight.phase_fraction = c.tolerances.phase_fraction;
    tight.wavelength_fraction = c.tolerances.wavelength_fraction;
    const auto rows = autocorrelation_identity(medium, noise, omegas, {c.l}, tight, c.threads);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.rel_error);
    run.check("closed form vs F int K |H|^2", worst <= 1e-10,
              "max relative difference " + num(worst) + " at " + std::to_string(rows.size()) +
                  " frequencies (bound 1e-10)");
    if (thin) {
      const double bound = noise.radial.thickness() * c.frequency.omega_max / (c.medium.epsilon * medium.surface_speed());
      run.check("thin-annulus gap", gap <= bound,
                "relative L2 gap " + num(gap) + " (bound d omega_max / (eps c) = " + num(bound) + ")");
    }
  }
}

void run_synthesize(Run& run) {
  const RunConfig& c = run.config();
  const Medium medium = c.medium.build();
  const NoiseSourceModel noise = c.noise.model();
  const SynthesisGrid grid = make_synthesis_grid(c.medium.epsilon, c.synthesis.record_length,
                                                 spectrum_reach(noise.spectrum));
  const TransferTable table = build_transfer_table(medium, noise, grid, c.l, c.tolerances, c.threads);
  const double dt = grid.dt();
  const auto lags = static_cast<std::size_t>(std::floor(c.synthesis.max_lag / dt));
  if (lags + 1 >= grid.samples) throw ConfigError("synthesis.max_lag: exceeds the record");
  const std::size_t window = grid.samples - lags;
  const std::size_t n_real = c.synthesis.realizations;

  std::vector<std::vector<double>> corr(n_real), pgram(n_real);
  std::vector<double> first;
  for (std::size_t r = 0; r < n_real; ++r) {
    const auto series = synthesize_recordings(table, 0, c.seed, r);
    corr[r] = empirical_cross_correlation(series, series, window, lags);
    pgram[r] = periodogram(series, grid);
    if (r == 0) first = series;
  }

  CsvTable rec{{"t", "p"}, {}};
  for (std::size_t j = 0; j < first.size(); ++j) rec.add({static_cast<double>(j) * dt, first[j]});
  Sidecar sr;
  sr.description = "synthesized surface recording p_{l,0}(t) of realization 0";
  sr.provenance = "empirical";
  sr.grid = {{"dt", dt}, {"samples", grid.samples}, {"record_length", grid.record_length}};
  sr.extra = {{"l", c.l}, {"m", 0}, {"realization", 0}};
  run.table("recording.csv", rec, sr);

  CsvTable ct{{"t", "C_empirical_mean", "C_empirical_std", "C_statistical"}, {}};
  double z_worst = 0.0;
  for (std::size_t j = 0; j <= lags; ++j) {
    double m = 0.0, q = 0.0;
    for (const auto& row : corr) m += row[j] / static_cast<double>(n_real);
    for (const auto& row : corr) q += (row[j] - m) * (row[j] - m);
    const double sd = n_real > 1 ? std::sqrt(q / static_cast<double>(n_real - 1)) : std::numeric_limits<double>::quiet_NaN();
    const double time = static_cast<double>(j) * dt;
    double stat = 0.0;
    for (std::size_t b = 0; b < table.bins.size(); ++b)
      stat += table.expected[b] * std::cos(static_cast<double>(table.bins[b]) * grid.d_omega() * time / grid.epsilon);
    stat *= grid.d_omega() / kPi;
    ct.add({time, m, sd, stat});
    if (j == 0 && n_real > 1) z_worst = std::abs(m - stat) / (sd / std::sqrt(static_cast<double>(n_real)));
  }
  Sidecar sc;
  sc.description = "empirical autocorrelation C^T(t) over realizations with window T = window * dt, and the statistical value";
  sc.provenance = "empirical";
  sc.grid = {{"dt", dt}, {"window", window}, {"max_lag", lags}};
  sc.extra = {{"l", c.l}, {"realizations", n_real}};
  run.table("empirical_correlation.csv", ct, sc);

  CsvTable pt{{"omega", "periodogram_mean", "C_statistical"}, {}};
  std::vector<double> mean(table.bins.size(), 0.0);
  for (std::size_t b = 0; b < table.bins.size(); ++b) {
    for (const auto& row : pgram) mean[b] += row[table.bins[b]] / static_cast<double>(n_real);
    pt.add({static_cast<double>(table.bins[b]) * grid.d_omega(), mean[b], table.expected[b]});
  }
  Sidecar sp;
  sp.description = "mean periodogram (d_omega / 2 pi) |p^_k|^2 on the noise bins and the statistical spectrum";
  sp.provenance = "empirical";
  sp.grid = {{"d_omega", grid.d_omega()}, {"bins", table.bins.size()}};
  sp.extra = {{"l", c.l}, {"realizations", n_real}};
  run.table("periodogram.csv", pt, sp);

  if (run.checking()) {
    // block means of the periodogram and of C^ share the same expectation, so the
    // gap is pure Monte Carlo noise of relative size 1 / sqrt(realizations * block)
    const std::size_t block = std::max<std::size_t>(1, (1600 + n_real - 1) / n_real);
    double num2 = 0.0, den = 0.0;
    for (std::size_t b0 = 0; b0 + block <= mean.size(); b0 += block) {
      double a = 0.0, e = 0.0;
      for (std::size_t b = b0; b < b0 + block; ++b) {
        a += mean[b];
        e += table.expected[b];
      }
      num2 += (a - e) * (a - e);
      den += e * e;
    }
    const double err = den > 0.0 ? std::sqrt(num2 / den) : 0.0;
    run.check("periodogram vs statistical spectrum", err <= 0.05,
              "relative L2 gap of " + std::to_string(block) + "-bin block means " + num(err) + " (bound 0.05)");
    if (n_real > 1)
      run.check("zero-lag autocorrelation", z_worst <= 5.0,
                "|mean - statistical| = " + num(z_worst) + " standard errors (bound 5)");
  }
}

void run_eigenfreqs(Run& run) {
  const RunConfig& c = run.config();
  const Medium medium = c.medium.build();
  const FrequencyGrid grid = c.frequency.grid();
  const auto peaks = eigenfrequency_scan(medium, grid, c.l, c.tolerances, c.threads);
  CsvTable t{{"omega", "value", "width", "divergent"}, {}};
  std::vector<double> where;
  for (const auto& p : peaks) {
    t.add({p.omega, p.value, p.width, p.divergent ? 1.0 : 0.0});
    where.push_back(p.omega);
  }
  Sidecar sc;
  sc.description = "peaks of the scattering operator (eigenfrequencies where R^ = 1)";
  sc.provenance = "wkb";
  sc.grid = grid_json(grid);
  sc.extra = {{"l", c.l}, {"count", peaks.size()}};
  run.table("peaks.csv", t, sc);

  if (run.checking()) {
    if (c.medium.homogeneous()) {
      const PeakMatch m = match_homogeneous_peaks(where, c.medium.epsilon, medium.surface_speed(),
                                                  c.medium.outer_radius);
      const double expected_count =
          std::floor(grid.back() / (kPi * c.medium.epsilon * medium.surface_speed() / c.medium.outer_radius)) -
          std::ceil(grid.front() / (kPi * c.medium.epsilon * medium.surface_speed() / c.medium.outer_radius)) + 1;
      const bool ok = !where.empty() && m.worst_offset <= 0.5 * grid.spacing() &&
                      static_cast<double>(where.size()) >= expected_count - 2;
      run.check("peaks at n pi eps c / R_o", ok,
                std::to_string(where.size()) + " peaks, worst offset " + num(m.worst_offset) +
                    " (bound " + num(0.5 * grid.spacing()) + ")");
    } else {
      run.check("peaks found", !where.empty(),
                std::to_string(where.size()) + " peaks; no closed-form reference for a stratified medium");
    }
  }
}

void run_robustness(Run& run) {
  const RunConfig& c = run.config();
  const auto& r = c.robustness;
  const Medium medium = c.medium.build();
  const NoiseSourceModel noise = c.noise.model();
  const FrequencyGrid grid = c.frequency.grid();
  auto wants = [&](const std::string& name) {
    return std::find(r.experiments.begin(), r.experiments.end(), name) != r.experiments.end();
  };

  if (wants("aperture")) {
    ApertureOptions o;
    o.l_max = c.l_max;
    o.pairs_per_angle = r.pairs_per_angle;
    o.record_length = c.synthesis.record_length;
    o.realizations = c.synthesis.realizations;
    o.max_lag = c.synthesis.max_lag;
    o.seed = c.seed;
    const ApertureStudy s = aperture_study(medium, noise, grid, o, c.tolerances, c.threads);
    CsvTable t{{"omega"}, {}};
    for (int l = 0; l <= c.l_max; ++l) {
      t.columns.push_back("C_direct_" + std::to_string(l));
      t.columns.push_back("C_pairs_" + std::to_string(l));
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<double> row{grid[k]};
      for (int l = 0; l <= c.l_max; ++l) {
        row.push_back(s.direct[l][k]);
        row.push_back(s.reconstructed[l][k]);
      }
      t.add(row);
    }
    Sidecar sc;
    sc.description = "C^_l from the direct computation and reconstructed from angle-pair covariances";
    sc.provenance = "empirical";
    sc.grid = grid_json(grid);
    sc.extra = {{"receivers", s.receivers}, {"worst_peak_offset", s.worst_offset}};
    run.table("aperture.csv", t, sc);
    if (run.checking()) {
      const double worst = *std::max_element(s.worst_offset.begin(), s.worst_offset.end());
      run.check("aperture peaks", worst <= grid.spacing(),
                "worst peak offset " + num(worst) + " (bound " + num(grid.spacing()) + ")");
    }
  }

  if (wants("weights")) {
    const WeightStudy s = weight_study(medium, noise, c.noise.angular_density(), c.l_max, grid,
                                       c.tolerances, c.threads);
    CsvTable t{{"omega"}, {}};
    for (int l = 0; l <= c.l_max; ++l) {
      t.columns.push_back("C_uniform_" + std::to_string(l));
      t.columns.push_back("C_weighted_" + std::to_string(l));
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<double> row{grid[k]};
      for (int l = 0; l <= c.l_max; ++l) {
        row.push_back(s.uniform[l][k]);
        row.push_back(s.weighted[l][k]);
      }
      t.add(row);
    }
    std::vector<double> sums;
    for (int l = 0; l <= c.l_max; ++l) sums.push_back(s.weights.degree_sum(l));
    Sidecar sc;
    sc.description = "m-summed spectra sum_m G_{l,m} C^_{l,m} for uniform and configured angular source densities";
    sc.provenance = "statistical";
    sc.grid = grid_json(grid);
    sc.extra = {{"angular", c.noise.angular}, {"degree_sums", sums}};
    run.table("weights.csv", t, sc);
    if (run.checking()) {
      double shift = 0.0, amp = 0.0;
      for (std::size_t l = 0; l < s.uniform_argmax.size(); ++l) {
        shift = std::max(shift, std::abs(s.uniform_argmax[l] - s.weighted_argmax[l]));
        amp = std::max(amp, s.amplitude_error[l]);
      }
      run.check("weighted peaks", shift <= grid.spacing(), "max argmax shift " + num(shift));
      run.check("weighted amplitudes", amp <= 1e-8, "max amplitude error " + num(amp) + " (bound 1e-8)");
    }
  }

  if (wants("perturbation")) {
    const auto& p = r.perturbation;
    const bool fast = p.mixing.amplitude != 0.0 || p.layered.amplitude != 0.0;
    const MediumSpec spec = c.medium;
    const PerturbationScaling s = perturbation_scaling(
        [&spec](double e) { return spec.build(e); }, p, r.epsilons, r.omegas, fast ? 4 : 1,
        c.tolerances, c.threads);
    CsvTable t{{"epsilon", "deviation"}, {}};
    for (std::size_t i = 0; i < s.epsilons.size(); ++i) t.add({s.epsilons[i], s.deviation[i]});
    Sidecar sc;
    sc.description = "RMS deviation ||R_perturbed - diag R^_l||_F / sqrt(n) of the coupled-mode reflection";
    sc.provenance = "wkb";
    sc.extra = {{"slope", s.slope}, {"omegas", r.omegas}, {"l_max", p.l_max}};
    run.table("perturbation.csv", t, sc);
    if (run.checking()) {
      const bool smooth_only = !fast && p.smooth.amplitude != 0.0;
      if (smooth_only)
        run.check("perturbation slope", std::abs(s.slope - (p.smooth.exponent - 1.0)) <= 0.2,
                  "slope " + num(s.slope) + " (expected " + num(p.smooth.exponent - 1.0) + " +- 0.2)");
      else
        run.check("perturbation slope", s.slope > 0.0, "slope " + num(s.slope) + " (needs > 0)");
    }
  }

  if (wants("noise")) {
    const SynthesisGrid sgrid = make_synthesis_grid(
        c.medium.epsilon, r.noise_record_length,
        std::max(spectrum_reach(noise.spectrum), spectrum_reach(r.measurement_noise)));
    const int lm = std::min(c.l_max, 2);
    const ModeSynthesizer synth(medium, noise, sgrid, lm, c.tolerances, c.threads);
    const auto signal = synth.realize(c.seed, 0, c.threads);
    const NoiseFloorStudy s = noise_floor_study(signal, lm, sgrid, r.measurement_noise, r.receivers,
                                                r.noise_realizations, c.seed, c.threads);
    CsvTable t{{"receivers", "measured", "predicted"}, {}};
    for (std::size_t i = 0; i < s.receivers.size(); ++i)
      t.add({static_cast<double>(s.receivers[i]), s.measured[i], s.predicted[i]});
    Sidecar sc;
    sc.description = "added lag-zero autocorrelation of the l = 0 coefficient from measurement noise";
    sc.provenance = "empirical";
    sc.extra = {{"repetitions", r.noise_realizations}, {"floor", "4 pi F^n(t = 0) / N"}};
    run.table("noise_floor.csv", t, sc);
    if (run.checking()) {
      double worst = 0.0;
      for (std::size_t i = 0; i < s.receivers.size(); ++i)
        worst = std::max(worst, std::abs(s.measured[i] / s.predicted[i] - 1.0));
      run.check("noise floor 1/N", worst <= 0.2, "max |measured / predicted - 1| = " + num(worst) + " (bound 0.2)");
    }
  }
}

void run_oracle(Run& run) {
  const RunConfig& c = run.config();
  const MediumSpec spec = c.medium;
  OracleOptions opt;
  opt.steps_per_wavelength = c.oracle.steps_per_wavelength;
  const WkbErrorReport rep = wkb_error_report([&spec](double e) { return spec.build(e); }, c.oracle.omegas,
                                              c.oracle.ls, c.oracle.epsilons, c.threads, opt);
  CsvTable t{{"epsilon", "omega", "l", "rel_error"}, {}};
  for (const auto& row : rep.rows) t.add({row.epsilon, row.omega, static_cast<double>(row.l), row.rel_error});
  Sidecar sc;
  sc.description = "relative error of the WKB surface response against the exact radial solve";
  sc.provenance = "oracle";
  sc.extra = {{"fitted_order", rep.fitted_order},
              {"epsilons", rep.epsilons},
              {"aggregate_error", rep.aggregate_error}};
  run.table("wkb_errors.csv", t, sc);
  if (run.checking())
    run.check("WKB error order", rep.fitted_order >= 0.7, "fitted order " + num(rep.fitted_order) + " (bound 0.7)");
}

void run_daylight(Run& run) {
  const RunConfig& c = run.config();
  const Medium medium = c.medium.build();
  const NoiseSourceModel noise = c.noise.model();
  const FrequencyGrid grid = c.frequency.grid();
  const SourceTrace pulse(c.medium.epsilon, c.source.spectrum, unit_angular(c.l_max), c.source.time_shift);
  std::vector<double> times = lag_times(c);
  times.erase(times.begin());  // t = 0 carries no information for sine series
  std::vector<int> ls;
  for (int l = 0; l <= c.l_max; ++l) ls.push_back(l);
  const DaylightSummary s = daylight_summary(medium, noise, pulse, ls, grid, times, c.tolerances, c.threads);
  CsvTable t{{"t"}, {}};
  for (int l : ls) {
    t.columns.push_back("dC_dt_" + std::to_string(l));
    t.columns.push_back("p_sym_" + std::to_string(l));
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::vector<double> row{times[j]};
    for (const auto& rep : s.reports) {
      row.push_back(rep.d_correlation[j]);
      row.push_back(rep.p_sym[j]);
    }
    t.add(row);
  }
  std::vector<double> corr, fitted, predicted;
  for (const auto& rep : s.reports) {
    corr.push_back(rep.correlation);
    fitted.push_back(rep.fitted_constant);
    predicted.push_back(rep.predicted_constant);
  }
  Sidecar sc;
  sc.description = "time derivative of the statistical autocorrelation and the symmetrized response per l";
  sc.provenance = "statistical";
  sc.grid = grid_json(grid);
  sc.extra = {{"correlation", corr}, {"fitted_constant", fitted}, {"predicted_constant", predicted},
              {"constant_spread", s.constant_spread}};
  run.table("daylight.csv", t, sc);
  if (run.checking()) {
    run.check("daylight correlation", s.min_correlation >= 0.99,
              "min normalized correlation " + num(s.min_correlation) + " (bound 0.99)");
    run.check("daylight constant", s.constant_spread <= 0.05,
              "spread of fitted constants " + num(s.constant_spread) + " (bound 0.05)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ambient-noise autocorrelation and daylight imaging in stratified spheres"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(GADI_VERSION));

  struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool check = false;
  } opt;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"scatter", "reflection function, scattering operator and source factors"},
      {"respond", "point-source response and symmetrized response"},
      {"correlate", "statistical and thin-annulus autocorrelations"},
      {"synthesize", "Monte Carlo recordings and empirical correlations"},
      {"eigenfreqs", "peaks of the scattering operator"},
      {"robustness", "aperture, angular weights, perturbations and measurement noise"},
      {"oracle", "WKB error against the exact radial solve"},
      {"daylight-check", "dC/dt against the symmetrized response"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "configuration file (JSON)")->required();
    sub->add_option("--out", opt.out, "output directory (overrides the config)");
    sub->add_option("--seed", opt.seed, "random seed (overrides the config)");
    sub->add_option("--threads", opt.threads, "worker threads (results do not depend on it)")
        ->check(CLI::Range(1, 1024));
    sub->add_flag("--check", opt.check, "evaluate the acceptance checks of the subcommand");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const std::map<std::string, std::function<void(Run&)>> handlers{
      {"scatter", run_scatter},       {"respond", run_respond},       {"correlate", run_correlate},
      {"synthesize", run_synthesize}, {"eigenfreqs", run_eigenfreqs}, {"robustness", run_robustness},
      {"oracle", run_oracle},         {"daylight-check", run_daylight}};

  std::optional<Run> run;
  try {
    RunConfig config = parse_config(opt.config);
    if (!opt.out.empty()) config.output = opt.out;
    if (opt.seed) config.seed = *opt.seed;
    if (opt.threads) config.threads = *opt.threads;
    run.emplace(std::move(config), name, opt.check);
    run->begin();
    handlers.at(name)(*run);
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    if (run) run->finish("partial", e.what());
    return kValidation;
  } catch (const ContractError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    if (run) run->finish("partial", e.what());
    return kValidation;
  } catch (const DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    if (run) run->finish("partial", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    if (run) run->finish("partial", e.what());
    return kNumerical;
  }
  run->finish("complete");
  if (run->failed()) {
    std::cerr << "one or more checks failed\n";
    return kCheckFailed;
  }
  return kOk;
}
