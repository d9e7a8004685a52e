#include "gadi/daylight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "gadi/parallel.hpp"
#include "gadi/random.hpp"

namespace gadi {

double RadialDensity::operator()(double r) const {
  if (r < r_lo || r > r_hi) return 0.0;
  if (shape == Shape::top_hat) return level;
  const double s = std::sin(kPi * (r - r_lo) / (r_hi - r_lo));
  return level * s * s;
}

namespace {

void require_loss(const Medium& medium, const char* what) {
  if (!(medium.kappa() > 0.0))
    throw ConfigError(std::string(what) + ": requires surface dissipation kappa > 0");
}

void validate_noise(const Medium& medium, const NoiseSourceModel& noise) {
  require_loss(medium, "noise model");
  const RadialDensity& k = noise.radial;
  if (!(k.r_hi > k.r_lo)) throw ConfigError("noise: radial support must have r_hi > r_lo");
  if (!(k.r_lo > medium.core_radius()) || k.r_hi > medium.outer_radius())
    throw ConfigError("noise: radial support must lie in (r_core, R_o]");
  if (!(k.level >= 0.0)) throw DomainError("noise: density level must be >= 0");
  if (!(noise.spectrum.amplitude >= 0.0)) throw DomainError("noise: power spectrum must be >= 0");
}

double max_gap(const QuadratureRule& rule, double lo, double hi) {
  double gap = std::max(rule.nodes[0] - lo, hi - rule.nodes[rule.size() - 1]);
  for (Eigen::Index i = 1; i < rule.size(); ++i) gap = std::max(gap, rule.nodes[i] - rule.nodes[i - 1]);
  return gap;
}

// Frequencies where the lobes are below e^{-50} of their peak are dropped.
std::pair<double, double> effective_band(const BandSpectrum& f) {
  const double lo = std::max(f.band_lo, std::max(0.0, f.center - 10.0 * f.width));
  const double hi = std::min(f.band_hi, f.center + 10.0 * f.width);
  return {lo, hi};
}

Complex resonance_checked(double gamma, Complex reflection, double omega) {
  const Complex d = 1.0 - gamma * reflection;
  if (std::abs(d) < kResonanceGuard) {
    std::ostringstream os;
    os.precision(17);
    os << "autocorrelation: |1 - Gamma R| = " << std::abs(d) << " at omega = " << omega;
    throw ResonanceError(os.str(), omega);
  }
  return d;
}

// Everything the closed forms need on one grid.
struct SpectrumPieces {
  ScatteringSpectrum scattering;
  QuadratureRule nodes;
  std::vector<double> density;
  std::vector<double> autocorrelation;
};

SpectrumPieces spectrum_pieces(const Medium& medium, const NoiseSourceModel& noise,
                               const FrequencyGrid& grid, int l, const Tolerances& tol, int threads,
                               const SourceQuadrature& quad) {
  if (grid.empty()) throw ConfigError("autocorrelation: empty frequency grid");
  SpectrumPieces out;
  out.nodes = source_rule(medium, noise, grid.back(), tol, quad);
  const auto n = static_cast<std::size_t>(out.nodes.size());
  std::vector<double> radii(n);
  out.density.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    radii[i] = out.nodes.nodes[static_cast<Eigen::Index>(i)];
    out.density[i] = noise.radial(radii[i]);
  }
  out.scattering = compute_spectrum(medium, grid, l, radii, tol, threads);
  const ScatteringSpectrum& sc = out.scattering;
  const double eps = medium.epsilon();
  const double ro = medium.outer_radius();
  const double gamma = sc.gamma;
  out.autocorrelation.assign(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = grid[k];
    const double f = noise.spectrum(w);
    if (f == 0.0) continue;
    const Complex d = resonance_checked(gamma, sc.reflection[k], w);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.density[i] == 0.0) continue;
      const double r = radii[i];
      const double phi = w * medium.travel_time_to_surface(r) / eps;
      const Complex v = sc.s_hat[k][i] + sc.t_hat[k][i] * std::polar(1.0, -2.0 * phi);
      acc += out.nodes.weights[static_cast<Eigen::Index>(i)] * medium.speed(r) / (r * r) *
             out.density[i] * std::norm(v);
    }
    out.autocorrelation[k] = eps * eps * f * medium.surface_speed() / (4.0 * ro * ro * w * w) *
                             (1.0 + gamma) * (1.0 + gamma) / std::norm(d) * acc;
  }
  return out;
}

}  // namespace

QuadratureRule source_rule(const Medium& medium, const NoiseSourceModel& noise, double omega_max,
                           const Tolerances& tol, const SourceQuadrature& quad) {
  validate_noise(medium, noise);
  if (quad.order < 1) throw ConfigError("source quadrature: order must be >= 1");
  if (!(omega_max > 0.0)) throw DomainError("source quadrature: omega_max must be positive");
  const double lo = noise.radial.r_lo;
  const double hi = noise.radial.r_hi;
  const double limit = tol.phase_fraction * kPi * medium.epsilon() /
                       (omega_max * medium.profile().max_slowness());
  if (quad.panels > 0) {
    QuadratureRule rule = composite_gauss_legendre(quad.panels, quad.order, lo, hi);
    const double gap = max_gap(rule, lo, hi);
    if (gap > limit) {
      std::ostringstream os;
      os.precision(6);
      os << "source quadrature: node spacing " << gap << " exceeds " << limit
         << " (phase resolution at omega = " << omega_max << "); raise the panel count";
      throw ConfigError(os.str());
    }
    return rule;
  }
  // The largest gap of an order-n Gauss panel is below 2.5 / n of its width.
  int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * 2.5 / (quad.order * limit))));
  QuadratureRule rule = composite_gauss_legendre(panels, quad.order, lo, hi);
  while (max_gap(rule, lo, hi) > limit) rule = composite_gauss_legendre(++panels, quad.order, lo, hi);
  return rule;
}

double statistical_autocorrelation(const Medium& medium, const NoiseSourceModel& noise,
                                   double omega, int l, const Tolerances& tol,
                                   const SourceQuadrature& quad) {
  return statistical_spectrum(medium, noise, FrequencyGrid(omega, 1.0, 1), l, tol, 1, quad).front();
}

std::vector<double> statistical_spectrum(const Medium& medium, const NoiseSourceModel& noise,
                                         const FrequencyGrid& grid, int l, const Tolerances& tol,
                                         int threads, const SourceQuadrature& quad) {
  return spectrum_pieces(medium, noise, grid, l, tol, threads, quad).autocorrelation;
}

namespace {

// The system couples amplitudes of very different size when |a| is large
// (strong localization), so it is assembled and solved in extended precision.
Complex solve_transfer(const Medium& medium, double omega, int l, double rs,
                       const ModePropagator& to_source, const ModePropagator& to_surface) {
  using Cl = std::complex<long double>;
  using M2 = Eigen::Matrix<Cl, 2, 2>;
  auto widen = [](const ModePropagator& p) {
    M2 m;
    m << Cl(p.a), Cl(std::conj(p.b)), Cl(p.b), Cl(std::conj(p.a));
    return m;
  };
  const M2 ms = widen(to_source);
  // P(R_s, R_o) = P(0, R_o) P(0, R_s)^{-1}
  M2 ms_inv;
  ms_inv << ms(1, 1), -ms(0, 1), -ms(1, 0), ms(0, 0);
  ms_inv /= ms(0, 0) * ms(1, 1) - ms(0, 1) * ms(1, 0);
  const M2 mso = widen(to_surface) * ms_inv;
  const double eps = medium.epsilon();
  const long double sigma = parity_sign(l);
  const long double gamma = gamma_surface(medium);
  const double phi = omega * medium.travel_time_to_surface(rs) / eps;
  const Cl jump = Cl(std::sqrt(eps) * std::polar(1.0, kPi / 4.0) * std::sqrt(medium.speed(rs)) /
                     (rs * std::sqrt(2.0 * omega)));

  // unknowns: alpha_0, beta_0, alpha-, beta-, alpha+, beta+, alpha_Ro, beta_Ro
  Eigen::Matrix<Cl, 8, 8> a = Eigen::Matrix<Cl, 8, 8>::Zero();
  Eigen::Matrix<Cl, 8, 1> rhs = Eigen::Matrix<Cl, 8, 1>::Zero();
  a(0, 0) = 1.0L;
  a(0, 1) = -sigma * Cl(std::conj(center_phase(medium, omega)));
  for (int i = 0; i < 2; ++i) {
    a(1 + i, 2 + i) = 1.0L;
    a(1 + i, 0) = -ms(i, 0);
    a(1 + i, 1) = -ms(i, 1);
    a(3 + i, 4 + i) = 1.0L;
    a(3 + i, 2 + i) = -1.0L;
    a(5 + i, 6 + i) = 1.0L;
    a(5 + i, 4) = -mso(i, 0);
    a(5 + i, 5) = -mso(i, 1);
  }
  rhs(3) = jump * Cl(std::polar(1.0, -phi));
  rhs(4) = -jump * Cl(std::polar(1.0, phi));
  a(7, 6) = 1.0L;
  a(7, 7) = -gamma;
  const Eigen::Matrix<Cl, 8, 1> x = a.fullPivLu().solve(rhs);
  const Complex out(static_cast<double>(x(6).real() + x(7).real()),
                    static_cast<double>(x(6).imag() + x(7).imag()));
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
    throw NumericalError("surface transfer: singular system");
  return std::sqrt(eps) * std::sqrt(medium.surface_speed()) * std::polar(1.0, kPi / 4.0) /
         (medium.outer_radius() * std::sqrt(2.0 * omega)) * out;
}

}  // namespace

Complex surface_transfer(const Medium& medium, double omega, int l, double rs,
                         const Tolerances& tol) {
  if (!(rs > medium.core_radius() && rs <= medium.outer_radius()))
    throw DomainError("surface transfer: source radius outside (r_core, R_o]");
  if (!(omega > 0.0)) throw DomainError("surface transfer: omega must be positive");
  require_loss(medium, "surface transfer");
  const auto props =
      integrate_checkpoints(medium, omega, medium.core_radius(), {rs, medium.outer_radius()}, tol);
  return solve_transfer(medium, omega, l, rs, props[0], props[1]);
}

Complex transfer_from_factors(const Medium& medium, double omega, double rs,
                              const SourceFactors& factors, Complex reflection) {
  const double eps = medium.epsilon();
  const double gamma = gamma_surface(medium);
  const Complex d = resonance_checked(gamma, reflection, omega);
  const double phi = omega * medium.travel_time_to_surface(rs) / eps;
  const Complex pre = -kI * eps * std::sqrt(medium.surface_speed() * medium.speed(rs)) /
                      (2.0 * omega * medium.outer_radius() * rs);
  return pre * (1.0 + gamma) * std::polar(1.0, phi) *
         (factors.s + factors.t * std::polar(1.0, -2.0 * phi)) / d;
}

double transfer_autocorrelation(const Medium& medium, const NoiseSourceModel& noise, double omega,
                                int l, const Tolerances& tol, const SourceQuadrature& quad) {
  const QuadratureRule rule = source_rule(medium, noise, omega, tol, quad);
  const double f = noise.spectrum(omega);
  if (f == 0.0) return 0.0;
  // one sweep through every node, as in the closed form
  std::vector<double> checkpoints(rule.nodes.data(), rule.nodes.data() + rule.size());
  checkpoints.push_back(medium.outer_radius());
  const auto props = integrate_checkpoints(medium, omega, medium.core_radius(), checkpoints, tol);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    const double k = noise.radial(r);
    if (k == 0.0) continue;
    const Complex h = solve_transfer(medium, omega, l, r, props[static_cast<std::size_t>(i)], props.back());
    acc += rule.weights[i] * k * std::norm(h);
  }
  return f * acc;
}

double source_strength(const Medium& medium, const RadialDensity& radial) {
  const QuadratureRule rule = composite_gauss_legendre(8, 8, radial.r_lo, radial.r_hi);
  return integrate(rule, [&](double r) { return medium.speed(r) * radial(r) / (r * r); });
}

namespace {

void check_thin(const Medium& medium, const NoiseSourceModel& noise, double omega,
                const Tolerances& tol) {
  validate_noise(medium, noise);
  const double limit = tol.wavelength_fraction * medium.epsilon() * medium.surface_speed() / omega;
  if (noise.radial.thickness() > limit) {
    std::ostringstream os;
    os.precision(6);
    os << "thin annulus: thickness " << noise.radial.thickness() << " exceeds " << limit
       << " (wavelength_fraction * eps * c_o(R_o) / omega at omega = " << omega << ")";
    throw ConfigError(os.str());
  }
}

double thin_value(const Medium& medium, double f, double strength, double omega, Complex reflection) {
  if (f == 0.0) return 0.0;
  const double gamma = gamma_surface(medium);
  const Complex d = resonance_checked(gamma, reflection, omega);
  const double ro = medium.outer_radius();
  const double eps = medium.epsilon();
  return eps * eps * f * medium.surface_speed() / (4.0 * ro * ro * omega * omega) * strength *
         (1.0 + gamma) * (1.0 + gamma) * std::norm(1.0 + reflection) / std::norm(d);
}

}  // namespace

double thin_annulus_autocorrelation(const Medium& medium, const NoiseSourceModel& noise,
                                    double omega, int l, const Tolerances& tol) {
  if (!(omega > 0.0)) throw DomainError("thin annulus: omega must be positive");
  check_thin(medium, noise, omega, tol);
  return thin_value(medium, noise.spectrum(omega), source_strength(medium, noise.radial), omega,
                    reflection_fundamental(medium, omega, l, tol));
}

std::vector<double> thin_annulus_spectrum(const Medium& medium, const NoiseSourceModel& noise,
                                          const FrequencyGrid& grid, int l, const Tolerances& tol,
                                          int threads) {
  if (grid.empty()) throw ConfigError("thin annulus: empty frequency grid");
  check_thin(medium, noise, grid.back(), tol);
  const double strength = source_strength(medium, noise.radial);
  const ScatteringSpectrum sc = compute_spectrum(medium, grid, l, {}, tol, threads);
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    out[k] = thin_value(medium, noise.spectrum(grid[k]), strength, grid[k], sc.reflection[k]);
  return out;
}

// ------------------------------------------------------------ synthesis

SynthesisGrid make_synthesis_grid(double epsilon, double record_length, double omega_max) {
  if (!(epsilon > 0.0) || !(record_length > 0.0) || !(omega_max > 0.0))
    throw ConfigError("synthesis grid: epsilon, record length and omega_max must be positive");
  SynthesisGrid g;
  g.epsilon = epsilon;
  g.record_length = record_length;
  // pi eps / dt >= 1.25 omega_max  <=>  N >= 1.25 omega_max T / (pi eps)
  const double need = 1.25 * omega_max * record_length / (kPi * epsilon);
  if (need > 1e9) throw ConfigError("synthesis grid: record needs more than 1e9 samples");
  std::size_t n = 2 * static_cast<std::size_t>(std::ceil(0.5 * need));
  g.samples = std::max<std::size_t>(n, 4);
  return g;
}

TransferTable build_transfer_table(const Medium& medium, const NoiseSourceModel& noise,
                                   const SynthesisGrid& grid, int l, const Tolerances& tol,
                                   int threads, const SourceQuadrature& quad) {
  if (std::abs(grid.epsilon - medium.epsilon()) > 1e-15 * medium.epsilon())
    throw ContractError("transfer table: synthesis grid and medium use different eps");
  const auto [lo, hi] = effective_band(noise.spectrum);
  const double dw = grid.d_omega();
  const std::size_t k_lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(lo / dw)));
  std::size_t k_hi = static_cast<std::size_t>(std::floor(hi / dw));
  if (k_hi >= grid.samples / 2) {
    std::ostringstream os;
    os << "transfer table: noise band reaches omega = " << hi << " beyond the Nyquist frequency "
       << (grid.samples / 2) * dw;
    throw ConfigError(os.str());
  }
  if (k_hi < k_lo) throw ConfigError("transfer table: no frequency bin inside the noise band");
  const FrequencyGrid fgrid(static_cast<double>(k_lo) * dw, dw, k_hi - k_lo + 1);
  SpectrumPieces pieces = spectrum_pieces(medium, noise, fgrid, l, tol, threads, quad);

  TransferTable t;
  t.l = l;
  t.grid = grid;
  t.nodes = pieces.nodes;
  t.density = pieces.density;
  const auto n = static_cast<std::size_t>(t.nodes.size());
  for (std::size_t k = 0; k < fgrid.size(); ++k) {
    const double f = noise.spectrum(fgrid[k]);
    if (f == 0.0) continue;
    t.bins.push_back(k_lo + k);
    t.spectrum.push_back(f);
    t.expected.push_back(pieces.autocorrelation[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = t.nodes.nodes[static_cast<Eigen::Index>(i)];
      const SourceFactors sf{pieces.scattering.s_hat[k][i], pieces.scattering.t_hat[k][i]};
      t.transfer.push_back(transfer_from_factors(medium, fgrid[k], r, sf, pieces.scattering.reflection[k]));
    }
  }
  return t;
}

std::vector<Complex> synthesize_spectrum(const TransferTable& table, int m, std::uint64_t seed,
                                         std::uint64_t realization, double angular_weight) {
  if (!(angular_weight >= 0.0)) throw DomainError("synthesis: angular weight must be >= 0");
  const auto n = static_cast<std::size_t>(table.nodes.size());
  const double dw = table.grid.d_omega();
  const double scale = std::sqrt(angular_weight);
  std::vector<Complex> out(table.bins.size());
  for (std::size_t b = 0; b < table.bins.size(); ++b) {
    CounterStream rng(stream_key(seed, {realization, static_cast<std::uint64_t>(table.l),
                                        static_cast<std::uint64_t>(static_cast<std::int64_t>(m)),
                                        table.bins[b]}));
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // draws are taken for every node so the stream layout does not depend on K
      const double w = table.nodes.weights[static_cast<Eigen::Index>(i)];
      const double var = 2.0 * kPi * table.spectrum[b] * table.density[i] / (dw * w);
      const Complex f = rng.complex_normal(var);
      acc += table.transfer[b * n + i] * f * w;
    }
    out[b] = scale * acc;
  }
  return out;
}

std::vector<double> series_from_spectrum(const SynthesisGrid& grid, const std::vector<std::size_t>& bins,
                                         const std::vector<Complex>& values) {
  if (bins.size() != values.size()) throw ContractError("series: bins and values differ in length");
  const std::size_t n = grid.samples;
  std::vector<Complex> y(n, Complex(0.0));
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (bins[b] == 0 || 2 * bins[b] >= n) throw ContractError("series: bin outside (0, samples / 2)");
    y[bins[b]] = values[b];
    y[n - bins[b]] = std::conj(values[b]);
  }
  // p_j = (d_omega / 2 pi) sum_k y_k e^{-2 pi i k j / N}
  Eigen::FFT<double> fft;
  std::vector<Complex> x;
  fft.fwd(x, y);
  const double scale = grid.d_omega() / (2.0 * kPi);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = scale * x[j].real();
  return out;
}

std::vector<double> synthesize_recordings(const TransferTable& table, int m, std::uint64_t seed,
                                          std::uint64_t realization, double angular_weight) {
  return series_from_spectrum(table.grid, table.bins,
                              synthesize_spectrum(table, m, seed, realization, angular_weight));
}

std::vector<double> synthesize_recordings(const Medium& medium, const NoiseSourceModel& noise, int l,
                                          int m, double record_length, std::uint64_t seed,
                                          std::uint64_t realization, const Tolerances& tol) {
  const SynthesisGrid grid =
      make_synthesis_grid(medium.epsilon(), record_length, effective_band(noise.spectrum).second);
  return synthesize_recordings(build_transfer_table(medium, noise, grid, l, tol), m, seed, realization);
}

std::vector<Complex> scaled_transform(const std::vector<double>& series, double dt, double epsilon) {
  if (series.empty()) throw ContractError("transform: empty series");
  const std::vector<Complex> x(series.begin(), series.end());
  Eigen::FFT<double> fft;
  std::vector<Complex> y;
  fft.fwd(y, x);
  std::vector<Complex> out(series.size() / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (dt / epsilon) * std::conj(y[k]);
  return out;
}

std::vector<double> periodogram(const std::vector<double>& series, const SynthesisGrid& grid) {
  if (series.size() != grid.samples) throw ContractError("periodogram: series length does not match the grid");
  const std::vector<Complex> p = scaled_transform(series, grid.dt(), grid.epsilon);
  std::vector<double> out(p.size());
  const double scale = grid.d_omega() / (2.0 * kPi);
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = scale * std::norm(p[k]);
  return out;
}

// ---------------------------------------------------------- correlation

std::vector<double> empirical_cross_correlation(const std::vector<double>& x,
                                                const std::vector<double>& y, std::size_t window,
                                                std::size_t max_lag) {
  if (window == 0) throw ConfigError("empirical correlation: empty window");
  if (x.size() < window || y.size() < window + max_lag) {
    std::ostringstream os;
    os << "empirical correlation: series have " << x.size() << " and " << y.size()
       << " samples, need window = " << window << " and window + max_lag = " << window + max_lag;
    throw ContractError(os.str());
  }
  // zero padding to m >= window + max_lag keeps the circular correlation exact
  std::size_t m = 1;
  while (m < window + max_lag) m <<= 1;
  std::vector<Complex> xp(m, Complex(0.0)), yp(m, Complex(0.0));
  for (std::size_t i = 0; i < window; ++i) xp[i] = x[i];
  for (std::size_t i = 0; i < window + max_lag; ++i) yp[i] = y[i];
  Eigen::FFT<double> fft;
  std::vector<Complex> fx, fy, prod(m), r;
  fft.fwd(fx, xp);
  fft.fwd(fy, yp);
  for (std::size_t k = 0; k < m; ++k) prod[k] = std::conj(fx[k]) * fy[k];
  fft.inv(r, prod);
  std::vector<double> out(max_lag + 1);
  for (std::size_t j = 0; j <= max_lag; ++j) out[j] = r[j].real() / static_cast<double>(window);
  return out;
}

CorrelationRecord empirical_autocorrelation(const std::vector<double>& series, double dt,
                                            std::size_t window, std::size_t max_lag,
                                            double epsilon) {
  CorrelationRecord rec;
  rec.lag_values = empirical_cross_correlation(series, series, window, max_lag);
  rec.provenance = "empirical";
  rec.epsilon = epsilon;
  rec.dt = dt;
  rec.record_length = static_cast<double>(window) * dt;
  rec.realizations = 1;
  return rec;
}

std::vector<double> lag_spectrum(const std::vector<double>& c, double dt, double epsilon,
                                 const FrequencyGrid& grid) {
  if (c.empty()) throw ContractError("lag spectrum: no lag values");
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double step = grid[k] * dt / epsilon;
    double acc = c[0];
    for (std::size_t j = 1; j < c.size(); ++j) acc += 2.0 * c[j] * std::cos(step * static_cast<double>(j));
    out[k] = dt / epsilon * acc;
  }
  return out;
}

// ----------------------------------------------------- daylight identity

DaylightReport daylight_identity_check(const Medium& medium, const NoiseSourceModel& noise,
                                       const SourceTrace& source, int l, const FrequencyGrid& grid,
                                       const std::vector<double>& times, const Tolerances& tol,
                                       int threads) {
  if (!source.is_even())
    throw ContractError("daylight: the pulse is not even, so its transform is not real");
  if (std::abs(source.epsilon() - medium.epsilon()) > 1e-15 * medium.epsilon())
    throw ContractError("daylight: pulse and medium use different eps");
  if (times.empty()) throw ConfigError("daylight: no evaluation times");
  double scale = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    scale = std::max(scale, std::abs(source.transform(grid[k])));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double f = source.transform(grid[k]).real();
    const double n = noise.spectrum(grid[k]);
    if (std::abs(f - n) > 1e-12 * std::max(scale, 1e-300)) {
      std::ostringstream os;
      os.precision(10);
      os << "daylight: noise power spectrum " << n << " differs from the pulse spectrum " << f
         << " at omega = " << grid[k]
         << (n == 0.0 ? " (the noise has no power where the pulse does)" : "");
      throw ContractError(os.str());
    }
  }

  const SpectrumPieces pieces = spectrum_pieces(medium, noise, grid, l, tol, threads, {});
  const double eps = medium.epsilon();
  const double ro = medium.outer_radius();
  const double gamma = pieces.scattering.gamma;
  // p^sym = -i A(w), with A real; both traces are -(1/pi) int_0^inf g(w) sin(w t / eps) dw.
  std::vector<double> a(grid.size()), g(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = grid[k];
    const double f = noise.spectrum(w);
    const double op = f == 0.0 ? 0.0 : scattering_value(gamma, pieces.scattering.reflection[k], w);
    a[k] = eps * medium.surface_speed() / (2.0 * w * ro * ro) * f * (1.0 - gamma * gamma) * op;
    g[k] = w / eps * pieces.autocorrelation[k];
  }

  DaylightReport rep;
  rep.l = l;
  rep.t = times;
  rep.d_correlation.resize(times.size());
  rep.p_sym.resize(times.size());
  const double dw = grid.spacing();
  for (std::size_t j = 0; j < times.size(); ++j) {
    double dc = 0.0, ps = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double s = std::sin(grid[k] * times[j] / eps);
      dc += g[k] * s;
      ps += a[k] * s;
    }
    rep.d_correlation[j] = -dw / kPi * dc;
    rep.p_sym[j] = -dw / kPi * ps;
  }
  double cp = 0.0, pp = 0.0, cc = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    cp += rep.d_correlation[j] * rep.p_sym[j];
    pp += rep.p_sym[j] * rep.p_sym[j];
    cc += rep.d_correlation[j] * rep.d_correlation[j];
  }
  if (!(pp > 0.0) || !(cc > 0.0))
    throw NumericalError("daylight: a trace vanishes identically on the evaluation times");
  rep.correlation = cp / std::sqrt(pp * cc);
  rep.fitted_constant = cp / pp;
  rep.predicted_constant =
      source_strength(medium, noise.radial) * (1.0 + gamma) / (2.0 * (1.0 - gamma));
  return rep;
}

}  // namespace gadi
