#include "gadi/robustness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "gadi/propagator.hpp"
#include "gadi/random.hpp"

namespace gadi {

namespace {

using Vec3 = Eigen::Vector3d;

Vec3 to_vector(const SurfacePoint& p) {
  return {std::sin(p.theta) * std::cos(p.phi), std::sin(p.theta) * std::sin(p.phi), std::cos(p.theta)};
}

SurfacePoint to_point(const Vec3& v) {
  const Vec3 u = v.normalized();
  double phi = std::atan2(u.y(), u.x());
  if (phi < 0.0) phi += 2.0 * kPi;
  return {std::acos(std::clamp(u.z(), -1.0, 1.0)), phi};
}

Vec3 random_direction(CounterStream& rng) {
  for (;;) {
    const Vec3 v(rng.normal(), rng.normal(), rng.normal());
    if (v.norm() > 1e-12) return v.normalized();
  }
}

}  // namespace

double angular_distance(const SurfacePoint& x, const SurfacePoint& y) {
  const Vec3 a = to_vector(x), b = to_vector(y);
  // atan2 form stays accurate near 0 and pi
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

// ------------------------------------------------- pair covariance

QuadratureRule pair_angle_rule(int l_max) {
  if (l_max < 0) throw DomainError("pair angles: l_max must be >= 0");
  return gauss_legendre(l_max + 1);
}

std::vector<double> reconstruct_Cl_from_pairs(const AnglePairCovariance& cov, int l) {
  if (l < 0) throw DomainError("pair reconstruction: l must be >= 0");
  const Eigen::Index n = cov.rule.size();
  if (n == 0) throw ConfigError("pair reconstruction: no pair angles");
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(std::abs(cov.rule.nodes[j]) < 1.0))
      throw ConfigError("pair reconstruction: pair angles must lie strictly inside (0, pi)");
  if (cov.values.cols() != n)
    throw ContractError("pair reconstruction: value columns do not match the angle rule");
  std::vector<double> out(static_cast<std::size_t>(cov.values.rows()));
  for (Eigen::Index i = 0; i < cov.values.rows(); ++i)
    out[static_cast<std::size_t>(i)] = legendre_project(cov.values.row(i).transpose(), cov.rule, l);
  return out;
}

AnglePairCovariance pair_covariance_from_modes(const std::vector<std::vector<double>>& mode_lags,
                                               const std::vector<double>& times, int l_max) {
  if (mode_lags.size() != static_cast<std::size_t>(l_max + 1))
    throw ContractError("pair covariance: need one lag series per degree");
  AnglePairCovariance cov;
  cov.rule = pair_angle_rule(l_max);
  cov.times = times;
  cov.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), cov.rule.size());
  for (int l = 0; l <= l_max; ++l) {
    if (mode_lags[l].size() != times.size()) throw ContractError("pair covariance: lag length mismatch");
    for (Eigen::Index j = 0; j < cov.rule.size(); ++j) {
      const double w = legendre(l, cov.rule.nodes[j]) / pair_to_mode_factor(l);
      for (std::size_t i = 0; i < times.size(); ++i)
        cov.values(static_cast<Eigen::Index>(i), j) += w * mode_lags[l][i];
    }
  }
  return cov;
}

PairLayout node_targeted_pairs(const QuadratureRule& rule, std::size_t pairs_per_angle,
                               std::uint64_t seed) {
  if (pairs_per_angle == 0) throw ConfigError("pair layout: need at least one pair per angle");
  PairLayout layout;
  layout.rule = rule;
  CounterStream rng(stream_key(seed, {0x70616972ULL}));
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    const double omega = std::acos(rule.nodes[j]);
    for (std::size_t p = 0; p < pairs_per_angle; ++p) {
      const Vec3 u = random_direction(rng);
      Vec3 w = random_direction(rng);
      w -= w.dot(u) * u;
      if (w.norm() < 1e-8) w = u.unitOrthogonal();
      const Vec3 v = std::cos(omega) * u + std::sin(omega) * w.normalized();
      layout.first.push_back(layout.receivers.size());
      layout.receivers.push_back(to_point(u));
      layout.second.push_back(layout.receivers.size());
      layout.receivers.push_back(to_point(v));
      layout.angle_index.push_back(j);
    }
  }
  return layout;
}

std::vector<std::vector<double>> field_at_receivers(
    const std::vector<std::vector<double>>& mode_series, int l_max,
    const std::vector<SurfacePoint>& receivers) {
  if (mode_series.size() != static_cast<std::size_t>(ModeIndex::count(l_max)))
    throw ContractError("receiver field: need one series slot per mode");
  std::size_t length = 0;
  for (const auto& s : mode_series) {
    if (s.empty()) continue;
    if (length != 0 && s.size() != length) throw ContractError("receiver field: series lengths differ");
    length = s.size();
  }
  std::vector<std::vector<double>> out(receivers.size(), std::vector<double>(length, 0.0));
  for (std::size_t r = 0; r < receivers.size(); ++r)
    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m) {
        const auto& s = mode_series[ModeIndex::flat(l, m)];
        if (s.empty()) continue;
        const double y = real_spherical_harmonic(l, m, receivers[r].theta, receivers[r].phi);
        for (std::size_t i = 0; i < length; ++i) out[r][i] += y * s[i];
      }
  return out;
}

AnglePairCovariance estimate_pair_covariance(const PairLayout& layout,
                                             const std::vector<std::vector<double>>& series,
                                             double dt, std::size_t window, std::size_t max_lag) {
  if (series.size() != layout.receivers.size())
    throw ContractError("pair covariance: one series per receiver required");
  AnglePairCovariance cov;
  cov.rule = layout.rule;
  cov.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(max_lag + 1), layout.rule.size());
  for (std::size_t j = 0; j <= max_lag; ++j) cov.times.push_back(static_cast<double>(j) * dt);
  std::vector<std::size_t> counts(static_cast<std::size_t>(layout.rule.size()), 0);
  for (std::size_t p = 0; p < layout.first.size(); ++p) {
    const auto& x = series[layout.first[p]];
    const auto& y = series[layout.second[p]];
    const auto xy = empirical_cross_correlation(x, y, window, max_lag);
    const auto yx = empirical_cross_correlation(y, x, window, max_lag);
    const Eigen::Index col = layout.angle_index[p];
    for (std::size_t j = 0; j <= max_lag; ++j)
      cov.values(static_cast<Eigen::Index>(j), col) += 0.5 * (xy[j] + yx[j]);
    ++counts[static_cast<std::size_t>(col)];
  }
  for (Eigen::Index c = 0; c < cov.values.cols(); ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0)
      throw ConfigError("pair covariance: no receiver pair at angle node " + std::to_string(c));
    cov.values.col(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  cov.pairs_per_angle = layout.first.size() / static_cast<std::size_t>(layout.rule.size());
  cov.realizations = 1;
  return cov;
}

// ------------------------------------------------- angular weights

namespace {

CorrelationRecord scaled(const CorrelationRecord& r, double g) {
  CorrelationRecord out = r;
  for (double& v : out.lag_values) v *= g;
  for (double& v : out.spectrum) v *= g;
  return out;
}

}  // namespace

WeightedRecords apply_angular_weights(const std::vector<CorrelationRecord>& records,
                                      const WeightTable& weights) {
  for (Eigen::Index i = 0; i < weights.values.size(); ++i)
    if (!(weights.values[i] >= 0.0)) throw DomainError("angular weights: G_{l,m} must be >= 0");
  std::map<int, const CorrelationRecord*> by_mode;
  for (const CorrelationRecord& r : records) {
    if (r.l < 0 || r.l > weights.l_max || std::abs(r.m) > r.l)
      throw ContractError("angular weights: record mode outside the weight table");
    if (!by_mode.emplace(ModeIndex::flat(r.l, r.m), &r).second)
      throw ContractError("angular weights: duplicate record for one mode");
  }
  if (by_mode.size() != static_cast<std::size_t>(ModeIndex::count(weights.l_max)))
    throw ContractError("angular weights: every (l, m) up to l_max needs a record");

  WeightedRecords out;
  for (const CorrelationRecord& r : records) out.per_mode.push_back(scaled(r, weights(r.l, r.m)));
  for (int l = 0; l <= weights.l_max; ++l) {
    CorrelationRecord sum = scaled(*by_mode.at(ModeIndex::flat(l, -l)), weights(l, -l));
    sum.m = 0;
    for (int m = -l + 1; m <= l; ++m) {
      const CorrelationRecord& r = *by_mode.at(ModeIndex::flat(l, m));
      if (r.lag_values.size() != sum.lag_values.size() || r.spectrum.size() != sum.spectrum.size())
        throw ContractError("angular weights: records of one degree have different grids");
      const double g = weights(l, m);
      for (std::size_t i = 0; i < sum.lag_values.size(); ++i) sum.lag_values[i] += g * r.lag_values[i];
      for (std::size_t i = 0; i < sum.spectrum.size(); ++i) sum.spectrum[i] += g * r.spectrum[i];
      sum.realizations = std::min(sum.realizations, r.realizations);
    }
    out.m_summed.push_back(std::move(sum));
  }
  return out;
}

// ------------------------------------------------- angular medium perturbations

PerturbationRealization realize_perturbation(const AngularPerturbation& p, double eps) {
  if (!(p.r_hi > p.r_lo)) throw ConfigError("angular perturbation: need r_hi > r_lo");
  PerturbationRealization out;
  if (p.layered.amplitude != 0.0) {
    if (!(p.layered.correlation > 0.0)) throw ConfigError("angular perturbation: layered cell length must be positive");
    const double cell = eps * p.layered.correlation;
    CounterStream rng(stream_key(p.seed, {0x6c617965ULL, static_cast<std::uint64_t>(std::llround(1.0 / eps))}));
    for (double r = p.r_lo; r < p.r_hi; r += cell) {
      out.layered_edges.push_back(r);
      out.layered_values.push_back(rng.uniform() < 0.5 ? -1.0 : 1.0);
    }
    out.layered_edges.push_back(p.r_hi);
  }
  if (p.mixing.amplitude != 0.0) {
    if (!(p.mixing.correlation > 0.0)) throw ConfigError("angular perturbation: mixing correlation must be positive");
    const double cell = eps * eps;
    const auto cells = static_cast<std::size_t>(std::ceil((p.r_hi - p.r_lo) / cell));
    if (cells > 50'000'000) throw ConfigError("angular perturbation: too many mixing cells");
    const double rho = std::exp(-1.0 / p.mixing.correlation);
    const double kick = std::sqrt(1.0 - rho * rho);
    CounterStream rng(stream_key(p.seed, {0x6d697869ULL, static_cast<std::uint64_t>(std::llround(1.0 / eps))}));
    double x = rng.normal();
    double mean = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      out.mixing_edges.push_back(p.r_lo + static_cast<double>(i) * cell);
      out.mixing_values.push_back(x);
      mean += x;
      x = rho * x + kick * rng.normal();
    }
    out.mixing_edges.push_back(p.r_hi);
    // cells are equal except the last, which is clipped at r_hi
    double total = 0.0;
    mean = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double w = out.mixing_edges[i + 1] - out.mixing_edges[i];
      mean += w * out.mixing_values[i];
      total += w;
    }
    mean /= total;
    for (double& v : out.mixing_values) v -= mean;
  }
  return out;
}

namespace {

double cell_value(const std::vector<double>& edges, const std::vector<double>& values, double r) {
  if (values.empty() || r < edges.front() || r >= edges.back()) return 0.0;
  const auto it = std::upper_bound(edges.begin(), edges.end(), r);
  return values[static_cast<std::size_t>(it - edges.begin()) - 1];
}

// B_{ij} = int conj(Y_i) h Y_j over the sphere, h = Y^real_{degree,order}
Eigen::MatrixXcd coupling_matrix(const PerturbationComponent& c, int l_max) {
  const int n = ModeIndex::count(l_max);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  if (c.amplitude == 0.0) return b;
  if (c.degree < 0 || std::abs(c.order) > c.degree)
    throw ConfigError("angular perturbation: invalid angular profile index");
  const int deg = 2 * l_max + c.degree;
  const AngularGrid grid(deg / 2 + 1, deg + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ModeIndex a = ModeIndex::from_flat(i), d = ModeIndex::from_flat(j);
      b(i, j) = grid.integrate([&](double th, double ph) {
        return std::conj(spherical_harmonic(a.l, a.m, th, ph)) *
               real_spherical_harmonic(c.degree, c.order, th, ph) * spherical_harmonic(d.l, d.m, th, ph);
      });
    }
  return b;
}

}  // namespace

CoupledModeResult coupled_mode_integrate(const Medium& medium, const AngularPerturbation& p,
                                         double omega, const Tolerances& tol) {
  if (!(omega > 0.0)) throw DomainError("coupled modes: omega must be positive");
  if (p.l_max < 0 || p.l_max > 8) throw ConfigError("coupled modes: l_max must be in [0, 8]");
  if (!(p.r_lo > medium.core_radius()) || p.r_hi > medium.outer_radius())
    throw ConfigError("coupled modes: perturbation support must lie in (r_core, R_o]");
  const double eps = medium.epsilon();
  const int n = ModeIndex::count(p.l_max);
  const PerturbationRealization real = realize_perturbation(p, eps);
  const Eigen::MatrixXcd b21 = coupling_matrix(p.smooth, p.l_max) * (p.smooth.amplitude * std::pow(eps, p.smooth.exponent));
  const Eigen::MatrixXcd b22 = coupling_matrix(p.layered, p.l_max) * (p.layered.amplitude * std::pow(eps, p.layered.exponent));
  const Eigen::MatrixXcd b23 = coupling_matrix(p.mixing, p.l_max) * (p.mixing.amplitude * std::pow(eps, p.mixing.exponent));
  const bool smooth_on = p.smooth.amplitude != 0.0;

  // every radius where a coefficient jumps
  std::vector<double> edges{medium.core_radius(), medium.outer_radius(), p.r_lo, p.r_hi};
  for (double r : medium.profile().breakpoints()) edges.push_back(r);
  for (double r : medium.fluctuation_edges()) edges.push_back(r);
  edges.insert(edges.end(), real.layered_edges.begin(), real.layered_edges.end());
  edges.insert(edges.end(), real.mixing_edges.begin(), real.mixing_edges.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::remove_if(edges.begin(), edges.end(),
                             [&](double r) { return r < medium.core_radius() || r > medium.outer_radius(); }),
              edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(), [](double x, double y) { return y - x < 1e-14; }),
              edges.end());

  // Y = (alpha; beta) columns, one per initial mode
  const Complex e_conj = std::conj(center_phase(medium, omega));
  Eigen::MatrixXcd ya = Eigen::MatrixXcd::Zero(n, n), yb = Eigen::MatrixXcd::Identity(n, n);
  for (int i = 0; i < n; ++i) ya(i, i) = static_cast<double>(parity_sign(ModeIndex::from_flat(i).l)) * e_conj;

  const double h_max = max_phase_step(medium, omega, tol);
  const double k0 = omega / (2.0 * eps);
  long steps = 0;
  Eigen::MatrixXcd a_mat(n, n);

  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const double mid = 0.5 * (lo + hi);
    const double v1 = slowness_perturbation(medium, mid);
    const double s22 = cell_value(real.layered_edges, real.layered_values, mid);
    const double s23 = cell_value(real.mixing_edges, real.mixing_values, mid);
    const bool inside = mid >= p.r_lo && mid < p.r_hi;
    const bool coupled = inside && (smooth_on || s22 != 0.0 || s23 != 0.0);
    if (v1 == 0.0 && !coupled) continue;
    Eigen::MatrixXcd fixed = Eigen::MatrixXcd::Identity(n, n) * v1;
    if (inside) fixed += s22 * b22 + s23 * b23;
    auto rhs = [&](double r, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, Eigen::MatrixXcd& da,
                   Eigen::MatrixXcd& db) {
      a_mat = fixed;
      if (inside && smooth_on) a_mat += std::sin(kPi * (r - p.r_lo) / (p.r_hi - p.r_lo)) * b21;
      const double c = medium.speed(r);
      const double theta = omega * medium.travel_time_to_surface(r) / eps;
      const Complex ph = std::polar(1.0, 2.0 * theta);
      const Eigen::MatrixXcd au = (k0 * c) * (a_mat * (a + std::conj(ph) * b));
      da = -kI * au;
      db = (kI * ph) * au;
    };
    // Dormand-Prince 5(4)
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    std::array<Eigen::MatrixXcd, 7> ka, kb;
    double r = lo;
    double h = std::min(h_max, hi - lo);
    int guard = 0;
    while (r < hi) {
      if (++guard > 10'000'000) throw IntegrationError("coupled modes: step budget exhausted", 0.0);
      h = std::min(h, hi - r);
      const bool last = (r + h >= hi);
      rhs(r, ya, yb, ka[0], kb[0]);
      rhs(r + c2 * h, ya + h * a21 * ka[0], yb + h * a21 * kb[0], ka[1], kb[1]);
      rhs(r + c3 * h, ya + h * (a31 * ka[0] + a32 * ka[1]), yb + h * (a31 * kb[0] + a32 * kb[1]), ka[2], kb[2]);
      rhs(r + c4 * h, ya + h * (a41 * ka[0] + a42 * ka[1] + a43 * ka[2]),
          yb + h * (a41 * kb[0] + a42 * kb[1] + a43 * kb[2]), ka[3], kb[3]);
      rhs(r + c5 * h, ya + h * (a51 * ka[0] + a52 * ka[1] + a53 * ka[2] + a54 * ka[3]),
          yb + h * (a51 * kb[0] + a52 * kb[1] + a53 * kb[2] + a54 * kb[3]), ka[4], kb[4]);
      rhs(r + h, ya + h * (a61 * ka[0] + a62 * ka[1] + a63 * ka[2] + a64 * ka[3] + a65 * ka[4]),
          yb + h * (a61 * kb[0] + a62 * kb[1] + a63 * kb[2] + a64 * kb[3] + a65 * kb[4]), ka[5], kb[5]);
      const Eigen::MatrixXcd na = ya + h * (b1 * ka[0] + b3 * ka[2] + b4 * ka[3] + b5 * ka[4] + b6 * ka[5]);
      const Eigen::MatrixXcd nb = yb + h * (b1 * kb[0] + b3 * kb[2] + b4 * kb[3] + b5 * kb[4] + b6 * kb[5]);
      rhs(r + h, na, nb, ka[6], kb[6]);
      const Eigen::MatrixXcd ea =
          h * (e1 * ka[0] + e3 * ka[2] + e4 * ka[3] + e5 * ka[4] + e6 * ka[5] + e7 * ka[6]);
      const Eigen::MatrixXcd eb =
          h * (e1 * kb[0] + e3 * kb[2] + e4 * kb[3] + e5 * kb[4] + e6 * kb[5] + e7 * kb[6]);
      const double scale = std::max({ya.cwiseAbs().maxCoeff(), yb.cwiseAbs().maxCoeff(),
                                     na.cwiseAbs().maxCoeff(), nb.cwiseAbs().maxCoeff()});
      const double err = std::max(ea.cwiseAbs().maxCoeff(), eb.cwiseAbs().maxCoeff()) /
                         (tol.abs_tol + tol.rel_tol * scale);
      if (err <= 1.0) {
        ya = na;
        yb = nb;
        r = last ? hi : r + h;
        ++steps;
      }
      const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(h_max, h * grow);
      if (h < 1e-15 * std::max(1.0, hi)) throw IntegrationError("coupled modes: step size underflow", err);
    }
  }

  CoupledModeResult out;
  out.l_max = p.l_max;
  out.omega = omega;
  out.steps = steps;
  // beta(R_o) = Yb c and alpha(R_o) = Ya c for the center data c, so R = Yb Ya^{-1}
  out.reflection = yb * ya.inverse();
  const Eigen::MatrixXcd energy = ya.adjoint() * ya - yb.adjoint() * yb;
  const double ymax = std::max(ya.cwiseAbs().maxCoeff(), yb.cwiseAbs().maxCoeff());
  out.energy_residual = energy.cwiseAbs().maxCoeff() / (ymax * ymax);

  const double gamma = gamma_surface(medium);
  const double ro = medium.outer_radius();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd denom = id - gamma * out.reflection;
  const Complex pre = -kI * eps * medium.surface_speed() / (omega * ro * ro) * (0.5 * (1.0 + gamma));
  out.response = pre * (id + out.reflection) * denom.inverse();
  return out;
}

double coupled_deviation(const CoupledModeResult& result, const Medium& medium, const Tolerances& tol) {
  const int n = ModeIndex::count(result.l_max);
  Eigen::MatrixXcd base = Eigen::MatrixXcd::Zero(n, n);
  // R^_l depends on l only through the parity sign
  const Complex r_odd = reflection_fundamental(medium, result.omega, 1, tol);
  const Complex r_even = reflection_fundamental(medium, result.omega, 0, tol);
  for (int i = 0; i < n; ++i) base(i, i) = (ModeIndex::from_flat(i).l % 2) ? r_odd : r_even;
  return (result.reflection - base).norm() / std::sqrt(static_cast<double>(n));
}

// ------------------------------------------------- measurement noise

std::vector<SurfacePoint> uniform_receivers(std::size_t count, std::uint64_t seed) {
  CounterStream rng(stream_key(seed, {0x72656376ULL}));
  std::vector<SurfacePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(to_point(random_direction(rng)));
  return out;
}

std::vector<std::vector<double>> inject_measurement_noise(const std::vector<std::vector<double>>& series,
                                                          const SynthesisGrid& grid,
                                                          const BandSpectrum& noise,
                                                          std::uint64_t seed) {
  if (series.empty()) throw DomainError("measurement noise: no receivers");
  std::vector<std::size_t> bins;
  std::vector<double> power;
  const double dw = grid.d_omega();
  for (std::size_t k = 1; 2 * k < grid.samples; ++k) {
    const double f = noise(static_cast<double>(k) * dw);
    if (f > 0.0) {
      bins.push_back(k);
      power.push_back(f);
    }
  }
  std::vector<std::vector<double>> out = series;
  if (bins.empty()) return out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].size() != grid.samples)
      throw ContractError("measurement noise: series length does not match the grid");
    CounterStream rng(stream_key(seed, {0x6e6f6973ULL, i}));
    std::vector<Complex> values(bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b) values[b] = rng.complex_normal(2.0 * kPi * power[b] / dw);
    const std::vector<double> n = series_from_spectrum(grid, bins, values);
    for (std::size_t j = 0; j < n.size(); ++j) out[i][j] += n[j];
  }
  return out;
}

std::vector<double> project_receivers(const std::vector<std::vector<double>>& series,
                                      const std::vector<SurfacePoint>& receivers, int l, int m) {
  if (receivers.empty()) throw DomainError("receiver projection: no receivers");
  if (series.size() != receivers.size())
    throw ContractError("receiver projection: one series per receiver required");
  const std::size_t length = series.front().size();
  std::vector<double> out(length, 0.0);
  const double scale = 4.0 * kPi / static_cast<double>(receivers.size());
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    if (series[i].size() != length) throw ContractError("receiver projection: series lengths differ");
    const double y = scale * real_spherical_harmonic(l, m, receivers[i].theta, receivers[i].phi);
    for (std::size_t j = 0; j < length; ++j) out[j] += y * series[i][j];
  }
  return out;
}

double noise_floor(std::size_t receivers, double noise_value) {
  if (receivers == 0) throw DomainError("noise floor: N must be positive");
  return 4.0 * kPi * noise_value / static_cast<double>(receivers);
}

std::vector<double> noise_floor_lags(std::size_t receivers, const BandSpectrum& noise, double epsilon,
                                     double dt, std::size_t max_lag) {
  if (receivers == 0) throw DomainError("noise floor: N must be positive");
  const double lo = std::max(noise.band_lo, std::max(0.0, noise.center - 12.0 * noise.width));
  const double hi = std::min(noise.band_hi, noise.center + 12.0 * noise.width);
  std::vector<double> out(max_lag + 1, 0.0);
  if (!(hi > lo)) return out;
  for (std::size_t j = 0; j <= max_lag; ++j) {
    const double t = static_cast<double>(j) * dt;
    const int panels = 8 + static_cast<int>(std::ceil((hi - lo) * t / (epsilon * kPi)));
    const QuadratureRule rule = composite_gauss_legendre(panels, 12, lo, hi);
    const double f = integrate(rule, [&](double w) { return noise(w) * std::cos(w * t / epsilon); }) / kPi;
    out[j] = noise_floor(receivers, f);
  }
  return out;
}

}  // namespace gadi
