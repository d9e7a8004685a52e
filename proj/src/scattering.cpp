#include "gadi/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gadi/parallel.hpp"
#include "gadi/quadrature.hpp"

namespace gadi {

double BandSpectrum::operator()(double omega) const {
  const double w = std::abs(omega);
  if (w < band_lo || w > band_hi) return 0.0;
  const double u = (w - center) / width;
  const double v = (w + center) / width;
  return amplitude * (std::exp(-0.5 * u * u) + std::exp(-0.5 * v * v));
}

SourceTrace::SourceTrace(double epsilon, BandSpectrum spectrum, HarmonicTable g, double time_shift)
    : epsilon_(epsilon), spectrum_(spectrum), g_(std::move(g)), time_shift_(time_shift) {
  if (!(epsilon > 0.0)) throw DomainError("source: epsilon must be positive");
  if (!(spectrum.width > 0.0)) throw DomainError("source: spectral width must be positive");
}

Complex SourceTrace::transform(double omega) const {
  return spectrum_(omega) * std::polar(1.0, omega * time_shift_ / epsilon_);
}

Complex SourceTrace::coefficient(double omega, int l, int m) const {
  if (l > g_.l_max || std::abs(m) > l) throw DomainError("source: mode outside the angular table");
  return transform(omega) * g_(l, m);
}

double SourceTrace::sample(double t) const {
  // f(t) = (1/pi) int_0^inf f^(w) cos(w (t - t0) / eps) dw for a real even spectrum
  const double lo = std::max(spectrum_.band_lo, std::max(0.0, spectrum_.center - 12.0 * spectrum_.width));
  const double hi = std::min(spectrum_.band_hi, spectrum_.center + 12.0 * spectrum_.width);
  if (!(hi > lo)) return 0.0;
  const double rate = std::abs(t - time_shift_) / epsilon_;
  const int panels = 8 + static_cast<int>(std::ceil((hi - lo) * rate / kPi));
  const QuadratureRule rule = composite_gauss_legendre(panels, 12, lo, hi);
  const double s = t - time_shift_;
  const double value = integrate(rule, [&](double w) { return spectrum_(w) * std::cos(w * s / epsilon_); });
  return value / kPi;
}

Complex center_phase(const Medium& medium, double omega) {
  return std::polar(1.0, 2.0 * omega * medium.travel_time_to_surface(0.0) / medium.epsilon());
}

Complex reflection_from_propagator(const ModePropagator& interior, Complex phase, int l) {
  const Complex se = static_cast<double>(parity_sign(l)) * phase;
  const Complex num = interior.b + std::conj(interior.a) * se;
  const Complex den = interior.a + std::conj(interior.b) * se;
  // |den| >= |a| - |b| > 0 whenever |a|^2 - |b|^2 = 1
  if (std::abs(den) < 1e-300) throw NumericalError("reflection: vanishing denominator");
  return num / den;
}

Complex reflection_fundamental(const Medium& medium, double omega, int l, const Tolerances& tol) {
  const ModePropagator p =
      integrate_propagator(medium, omega, medium.core_radius(), medium.outer_radius(), tol);
  return reflection_from_propagator(p, center_phase(medium, omega), l);
}

namespace {

Complex guarded_denominator(double gamma, Complex reflection, double omega) {
  const Complex d = 1.0 - gamma * reflection;
  if (std::abs(d) < kResonanceGuard) {
    std::ostringstream os;
    os.precision(17);
    os << "resonance: |1 - Gamma R| = " << std::abs(d) << " at omega = " << omega
       << " (kappa = 0 response evaluated at an eigenfrequency)";
    throw ResonanceError(os.str(), omega);
  }
  return d;
}

}  // namespace

double scattering_value(double gamma, Complex reflection, double omega) {
  const Complex d = guarded_denominator(gamma, reflection, omega);
  return std::norm(1.0 + reflection) / std::norm(d);
}

Complex response_per_unit_source(const Medium& medium, double omega, Complex reflection) {
  const double gamma = gamma_surface(medium);
  const Complex d = guarded_denominator(gamma, reflection, omega);
  const double ro = medium.outer_radius();
  const Complex pre = -kI * medium.epsilon() * medium.surface_speed() / (omega * ro * ro);
  return pre * (0.5 * (1.0 + gamma)) * (1.0 + reflection) / d;
}

Complex point_source_response(const Medium& medium, const SourceTrace& source, double omega,
                              int l, int m, const Tolerances& tol) {
  const Complex f = source.coefficient(omega, l, m);
  if (f == Complex(0.0)) return 0.0;
  return f * response_per_unit_source(medium, omega, reflection_fundamental(medium, omega, l, tol));
}

Complex symmetrized_response(const Medium& medium, const SourceTrace& source, double omega, int l,
                             int m, const Tolerances& tol) {
  if (!source.is_even())
    throw ContractError("symmetrized response: the pulse is not even (time shift " +
                        std::to_string(source.time_shift()) + "), so f^ is not real");
  const Complex f = source.coefficient(omega, l, m);
  if (f == Complex(0.0)) return 0.0;
  const double gamma = gamma_surface(medium);
  const Complex r = reflection_fundamental(medium, omega, l, tol);
  const double ro = medium.outer_radius();
  const Complex pre = -kI * medium.epsilon() * medium.surface_speed() / (2.0 * omega * ro * ro);
  return pre * f * (1.0 - gamma * gamma) * scattering_value(gamma, r, omega);
}

double scattering_operator(const Medium& medium, double omega, int l, const Tolerances& tol) {
  return scattering_value(gamma_surface(medium), reflection_fundamental(medium, omega, l, tol), omega);
}

SourceFactors source_factors(const ModePropagator& to_source, const ModePropagator& to_surface,
                             Complex phase, int l) {
  const Complex se = static_cast<double>(parity_sign(l)) * phase;
  const Complex den = to_surface.a + std::conj(to_surface.b) * se;
  return {(to_source.a + std::conj(to_source.b) * se) / den,
          (to_source.b + std::conj(to_source.a) * se) / den};
}

ScatteringSpectrum compute_spectrum(const Medium& medium, const FrequencyGrid& grid, int l,
                                    const std::vector<double>& source_radii,
                                    const Tolerances& tol, int threads) {
  if (grid.empty()) throw ConfigError("scattering: empty frequency grid");
  if (l < 0) throw DomainError("scattering: l must be >= 0");
  std::vector<double> radii = source_radii;
  for (double r : radii)
    if (!(r > medium.core_radius() && r <= medium.outer_radius()))
      throw DomainError("scattering: source radius outside (r_core, R_o]");
  std::vector<std::size_t> order(radii.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return radii[x] < radii[y]; });
  std::vector<double> checkpoints;
  for (std::size_t j : order) checkpoints.push_back(radii[j]);
  checkpoints.push_back(medium.outer_radius());

  ScatteringSpectrum out;
  out.l = l;
  out.gamma = gamma_surface(medium);
  out.grid = grid;
  out.source_radii = radii;
  const std::size_t n = grid.size();
  out.reflection.resize(n);
  out.operator_value.resize(n);
  out.s_hat.assign(n, std::vector<Complex>(radii.size()));
  out.t_hat.assign(n, std::vector<Complex>(radii.size()));
  out.max_energy_residual.resize(n);

  parallel_for(n, threads, [&](std::size_t k) {
    const double w = grid[k];
    IntegrationStats stats;
    const auto props = integrate_checkpoints(medium, w, medium.core_radius(), checkpoints, tol, &stats);
    const ModePropagator& full = props.back();
    const Complex phase = center_phase(medium, w);
    const Complex r = reflection_from_propagator(full, phase, l);
    out.reflection[k] = r;
    const Complex d = 1.0 - out.gamma * r;
    out.operator_value[k] = std::abs(d) < kResonanceGuard
                                ? std::numeric_limits<double>::infinity()
                                : std::norm(1.0 + r) / std::norm(d);
    out.max_energy_residual[k] = std::max(stats.max_residual, std::abs(full.energy_residual()));
    for (std::size_t q = 0; q < order.size(); ++q) {
      const SourceFactors f = source_factors(props[q], full, phase, l);
      out.s_hat[k][order[q]] = f.s;
      out.t_hat[k][order[q]] = f.t;
    }
  });
  return out;
}

std::vector<SpectralPeak> find_peaks(const FrequencyGrid& grid, const std::vector<double>& y,
                                     bool lossless) {
  if (grid.empty() || y.size() != grid.size()) throw ConfigError("peak scan: empty or mismatched grid");
  std::vector<SpectralPeak> peaks;
  const std::size_t n = y.size();
  const double h = grid.spacing();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1])) continue;
    SpectralPeak p;
    p.omega = grid[k];
    p.value = y[k];
    p.divergent = lossless || std::isinf(y[k]);
    if (std::isfinite(y[k]) && y[k - 1] > 0.0 && y[k + 1] > 0.0) {
      // 1/y is close to a parabola near a resonance of |1 - Gamma R|^2
      const double um = 1.0 / y[k - 1], u0 = 1.0 / y[k], up = 1.0 / y[k + 1];
      const double curv = um - 2.0 * u0 + up;
      if (curv > 0.0) {
        const double shift = 0.5 * (um - up) / curv;
        if (std::abs(shift) <= 1.0) {
          p.omega = grid[k] + shift * h;
          const double u_min = u0 - 0.125 * (um - up) * (um - up) / curv;
          if (u_min > 0.0) p.value = 1.0 / u_min;
        }
      }
    }
    // full width at half maximum by linear interpolation
    const double half = 0.5 * p.value;
    double left = std::numeric_limits<double>::quiet_NaN();
    double right = left;
    for (std::size_t i = k; i > 0; --i)
      if (y[i - 1] < half) {
        left = grid[i - 1] + h * (half - y[i - 1]) / (y[i] - y[i - 1]);
        break;
      }
    for (std::size_t i = k; i + 1 < n; ++i)
      if (y[i + 1] < half) {
        right = grid[i] + h * (y[i] - half) / (y[i] - y[i + 1]);
        break;
      }
    p.width = right - left;
    if (!std::isfinite(y[k])) p.width = 0.0;
    peaks.push_back(p);
  }
  return peaks;
}

std::vector<SpectralPeak> eigenfrequency_scan(const Medium& medium, const FrequencyGrid& grid,
                                              int l, const Tolerances& tol, int threads) {
  if (grid.empty()) throw ConfigError("eigenfrequency scan: empty frequency grid");
  const ScatteringSpectrum spec = compute_spectrum(medium, grid, l, {}, tol, threads);
  return find_peaks(grid, spec.operator_value, medium.kappa() == 0.0);
}

}  // namespace gadi
