#include "gadi/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace gadi {

Eigen::Matrix2cd ModePropagator::matrix() const {
  Eigen::Matrix2cd m;
  m << a, std::conj(b), b, std::conj(a);
  return m;
}

ModePropagator compose(const ModePropagator& p1, const ModePropagator& p2) {
  if (p1.omega != p2.omega) throw ContractError("compose: propagators at different frequencies");
  const double gap = std::abs(p1.r_to - p2.r_from);
  if (gap > 1e-12 * std::max(1.0, std::abs(p2.r_from))) {
    std::ostringstream os;
    os << "compose: endpoint mismatch (first ends at r = " << p1.r_to
       << ", second starts at r = " << p2.r_from << ")";
    throw ContractError(os.str());
  }
  ModePropagator out;
  out.a = p2.a * p1.a + std::conj(p2.b) * p1.b;
  out.b = p2.b * p1.a + std::conj(p2.a) * p1.b;
  out.omega = p1.omega;
  out.r_from = p1.r_from;
  out.r_to = p2.r_to;
  return out;
}

ModePropagator inverse(const ModePropagator& p) {
  return {std::conj(p.a), -p.b, p.omega, p.r_to, p.r_from};
}

double max_phase_step(const Medium& medium, double omega, const Tolerances& tol) {
  return tol.phase_fraction * kPi * medium.epsilon() / (omega * medium.profile().max_slowness());
}

namespace {

using State = std::array<Complex, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Sweep {
 public:
  Sweep(const Medium& medium, double omega, const Tolerances& tol)
      : medium_(medium),
        omega_(omega),
        tol_(tol),
        k_scale_(omega / (2.0 * medium.epsilon())),
        phase_scale_(omega / medium.epsilon()),
        h_cap_(max_phase_step(medium, omega, tol)),
        piecewise_(medium.profile().kind() == SmoothProfile::Kind::piecewise_constant) {}

  // Advance y across [s0, s1], on which V is the constant v.
  void segment(State& y, double s0, double s1, double v, IntegrationStats& stats) {
    const double c_mid = medium_.speed(0.5 * (s0 + s1));
    const double theta0 = phase_scale_ * medium_.travel_time_to_surface(s0);
    const double k_const = k_scale_ * c_mid * v;

    auto rhs = [&](double r, const State& s) -> State {
      double theta;
      double k;
      if (piecewise_) {
        theta = theta0 - phase_scale_ * (r - s0) / c_mid;
        k = k_const;
      } else {
        theta = phase_scale_ * medium_.travel_time_to_surface(r);
        k = k_scale_ * medium_.speed(r) * v;
      }
      const Complex e = std::polar(1.0, 2.0 * theta);
      const Complex ik(0.0, k);
      return {ik * (-s[0] - std::conj(e) * s[1]), ik * (e * s[0] + s[1])};
    };

    double r = s0;
    double h = std::min(h_cap_, s1 - s0);
    if (h_prev_ > 0.0) h = std::min(h, h_prev_);
    State k1 = rhs(r, y);
    while (r < s1) {
      bool last = false;
      if (r + h >= s1 - 1e-14 * std::max(1.0, s1)) {
        h = s1 - r;
        last = true;
      }
      State k2, k3, k4, k5, k6, k7, tmp, y5;
      for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * a21 * k1[i];
      k2 = rhs(r + c2 * h, tmp);
      for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      k3 = rhs(r + c3 * h, tmp);
      for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = rhs(r + c4 * h, tmp);
      for (int i = 0; i < 2; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = rhs(r + c5 * h, tmp);
      for (int i = 0; i < 2; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      k6 = rhs(r + h, tmp);
      for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      k7 = rhs(r + h, y5);

      double err2 = 0.0;
      for (int i = 0; i < 2; ++i) {
        const Complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
        const double scale =
            tol_.abs_tol + tol_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err2 += std::norm(e) / (scale * scale);
      }
      const double err = std::sqrt(0.5 * err2);

      if (err <= 1.0) {
        r = last ? s1 : r + h;
        y = y5;
        k1 = k7;
        ++stats.accepted;
        stats.max_step = std::max(stats.max_step, h);
        const double residual = std::abs(std::norm(y[0]) - std::norm(y[1]) - 1.0);
        stats.max_residual = std::max(stats.max_residual, residual);
        worst_error_ = std::max(worst_error_, err);
        const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
        if (!last) h_prev_ = h;
        h = std::min(h_cap_, h * std::max(1.0, grow));
      } else {
        ++stats.rejected;
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (h < 1e-15 * std::max(1.0, s1)) {
          std::ostringstream os;
          os << "propagator: step size underflow at r = " << r << ", omega = " << omega_
             << " (local error estimate " << err << " x tolerance)";
          throw IntegrationError(os.str(), err);
        }
      }
    }
  }

  double worst_error() const { return worst_error_; }

 private:
  const Medium& medium_;
  double omega_;
  Tolerances tol_;
  double k_scale_;
  double phase_scale_;
  double h_cap_;
  bool piecewise_;
  double h_prev_ = 0.0;
  double worst_error_ = 0.0;
};

std::vector<double> step_nodes(const Medium& medium, double r_from, double r_to,
                               const std::vector<double>& checkpoints) {
  std::vector<double> nodes{r_from, r_to};
  auto add = [&](double x) {
    if (x > r_from && x < r_to) nodes.push_back(x);
  };
  for (double b : medium.profile().breakpoints()) add(b);
  for (double e : medium.fluctuation_edges()) add(e);
  for (double c : checkpoints) add(c);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

std::vector<ModePropagator> sweep_once(const Medium& medium, double omega, double r_from,
                                       const std::vector<double>& checkpoints,
                                       const Tolerances& tol, IntegrationStats& stats) {
  const double r_to = checkpoints.empty() ? r_from : checkpoints.back();
  const std::vector<double> nodes = step_nodes(medium, r_from, r_to, checkpoints);
  Sweep sweep(medium, omega, tol);
  State y{Complex(1.0), Complex(0.0)};
  std::vector<ModePropagator> out;
  out.reserve(checkpoints.size());
  std::size_t next = 0;
  auto emit = [&](double r) {
    while (next < checkpoints.size() && checkpoints[next] <= r) {
      out.push_back({y[0], y[1], omega, r_from, checkpoints[next]});
      ++next;
    }
  };
  emit(r_from);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double s0 = nodes[i];
    const double s1 = nodes[i + 1];
    const double v = slowness_perturbation(medium, 0.5 * (s0 + s1));
    if (v != 0.0) sweep.segment(y, s0, s1, v, stats);
    emit(s1);
  }
  if (stats.max_residual > kEnergyDriftLimit) {
    std::ostringstream os;
    os << "propagator: energy drift " << stats.max_residual << " at omega = " << omega;
    throw IntegrationError(os.str(), sweep.worst_error());
  }
  return out;
}

}  // namespace

std::vector<ModePropagator> integrate_checkpoints(const Medium& medium, double omega,
                                                  double r_from,
                                                  const std::vector<double>& checkpoints,
                                                  const Tolerances& tol, IntegrationStats* stats) {
  if (!(omega > 0.0)) throw DomainError("propagator: omega must be positive");
  if (!(r_from >= 0.0)) throw DomainError("propagator: r_from must be >= 0");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < r_from || (i > 0 && checkpoints[i] < checkpoints[i - 1]))
      throw DomainError("propagator: checkpoints must be ascending and >= r_from");
    if (checkpoints[i] > medium.outer_radius() * (1.0 + 1e-14))
      throw DomainError("propagator: checkpoint beyond R_o");
  }
  IntegrationStats local;
  try {
    auto out = sweep_once(medium, omega, r_from, checkpoints, tol, local);
    if (stats) *stats = local;
    return out;
  } catch (const IntegrationError&) {
    Tolerances tight = tol;
    tight.rel_tol *= 0.01;
    tight.abs_tol *= 0.01;
    IntegrationStats retry;
    retry.tightened = true;
    auto out = sweep_once(medium, omega, r_from, checkpoints, tight, retry);
    if (stats) *stats = retry;
    return out;
  }
}

ModePropagator integrate_propagator(const Medium& medium, double omega, double r_from,
                                    double r_to, const Tolerances& tol, IntegrationStats* stats) {
  if (r_to < r_from) throw DomainError("propagator: need r_from <= r_to");
  return integrate_checkpoints(medium, omega, r_from, {r_to}, tol, stats).front();
}

}  // namespace gadi
