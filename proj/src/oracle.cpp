#include "gadi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gadi/parallel.hpp"
#include "gadi/quadrature.hpp"
#include "gadi/scattering.hpp"
#include "gadi/spherical_bessel.hpp"

namespace gadi {

namespace {

constexpr int kStages = 4;

struct Collocation {
  double c[kStages];
  double a[kStages][kStages];
  double b[kStages];
};

const Collocation& gauss_collocation() {
  static const Collocation tab = [] {
    Collocation t{};
    const QuadratureRule rule = gauss_legendre(kStages);
    for (int i = 0; i < kStages; ++i) {
      t.c[i] = 0.5 * (rule.nodes[i] + 1.0);
      t.b[i] = 0.5 * rule.weights[i];
    }
    // a_ij = int_0^{c_i} L_j(s) ds, exact with the same 4-point rule on [0, c_i]
    for (int i = 0; i < kStages; ++i) {
      for (int j = 0; j < kStages; ++j) {
        double acc = 0.0;
        for (int q = 0; q < kStages; ++q) {
          const double s = 0.5 * t.c[i] * (rule.nodes[q] + 1.0);
          double lj = 1.0;
          for (int k = 0; k < kStages; ++k)
            if (k != j) lj *= (s - t.c[k]) / (t.c[j] - t.c[k]);
          acc += 0.5 * t.c[i] * rule.weights[q] * lj;
        }
        t.a[i][j] = acc;
      }
    }
    return t;
  }();
  return tab;
}

class RadialOperator {
 public:
  RadialOperator(const Medium& medium, double omega, int l)
      : medium_(medium), k_scale_(omega / medium.epsilon()), ll_(l * (l + 1.0)) {}

  double k2(double r) const {
    const double c = medium_.speed(r);
    return k_scale_ * k_scale_ * (1.0 / (c * c) + slowness_perturbation(medium_, r));
  }

  Eigen::Matrix2d matrix(double r) const {
    Eigen::Matrix2d a;
    a << 0.0, 1.0 / (r * r), ll_ - k2(r) * r * r, 0.0;
    return a;
  }

  // Transfer matrix of one collocation step from r to r + h (h may be negative).
  Eigen::Matrix2d step(double r, double h) const {
    const Collocation& tab = gauss_collocation();
    Eigen::Matrix2d a[kStages];
    for (int j = 0; j < kStages; ++j) a[j] = matrix(r + tab.c[j] * h);
    Eigen::Matrix<double, 2 * kStages, 2 * kStages> m;
    Eigen::Matrix<double, 2 * kStages, 2> rhs;
    for (int i = 0; i < kStages; ++i) {
      rhs.block<2, 2>(2 * i, 0).setIdentity();
      for (int j = 0; j < kStages; ++j)
        m.block<2, 2>(2 * i, 2 * j) = -h * tab.a[i][j] * a[j];
      m.block<2, 2>(2 * i, 2 * i) += Eigen::Matrix2d::Identity();
    }
    const Eigen::Matrix<double, 2 * kStages, 2> z = m.partialPivLu().solve(rhs);
    Eigen::Matrix2d t = Eigen::Matrix2d::Identity();
    for (int j = 0; j < kStages; ++j) t += h * tab.b[j] * a[j] * z.block<2, 2>(2 * j, 0);
    return t;
  }

  double local_wavenumber(double r) const { return std::sqrt(std::abs(k2(r)) + ll_ / (r * r)); }

 private:
  const Medium& medium_;
  double k_scale_;
  double ll_;
};

// Mesh between r0 and r1 (either order) with every jump of c_o and V as a node.
std::vector<double> radial_mesh(const Medium& medium, const RadialOperator& op, double r0, double r1,
                                const OracleOptions& opt) {
  const double lo = std::min(r0, r1);
  const double hi = std::max(r0, r1);
  std::vector<double> cuts{lo, hi};
  auto add = [&](double x) {
    if (x > lo && x < hi) cuts.push_back(x);
  };
  for (double b : medium.profile().breakpoints()) add(b);
  for (double e : medium.fluctuation_edges()) add(e);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> mesh{lo};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    double kmax = 0.0;
    for (int q = 0; q <= 4; ++q) kmax = std::max(kmax, op.local_wavenumber(a + (b - a) * (q + 0.5) / 5.0));
    kmax = std::max({kmax, op.local_wavenumber(a), op.local_wavenumber(b)});
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) * kmax / (2.0 * kPi) * opt.steps_per_wavelength)));
    for (int s = 1; s < n; ++s) mesh.push_back(a + (b - a) * s / n);
    mesh.push_back(b);
  }
  if (r0 > r1) std::reverse(mesh.begin(), mesh.end());
  return mesh;
}

using Vec2 = Eigen::Vector2cd;

// March y from mesh.front() to mesh.back(); optionally record every node.
Vec2 march(const RadialOperator& op, const std::vector<double>& mesh, Vec2 y,
           std::vector<Vec2>* record) {
  if (record) record->push_back(y);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const Eigen::Matrix2d t = op.step(mesh[i], mesh[i + 1] - mesh[i]);
    y = t.cast<Complex>() * y;
    if (record) record->push_back(y);
  }
  return y;
}

double center_radius(const Medium& medium, const OracleOptions& opt) {
  return opt.center_fraction * medium.core_radius();
}

Vec2 regular_start(const Medium& medium, double omega, int l, const OracleOptions& opt) {
  const double rd = center_radius(medium, opt);
  const double k0 = omega / (medium.epsilon() * medium.speed(0.0));
  const BesselValue jv = spherical_bessel_j(l, k0 * rd);
  return Vec2(jv.j, rd * rd * k0 * jv.dj);
}

Vec2 surface_start(const Medium& medium, double omega) {
  const double ro = medium.outer_radius();
  const Complex dp = 1.0 / ro + kI * medium.kappa() * omega / medium.epsilon();
  return Vec2(1.0, ro * ro * dp);
}

void check_radius(const Medium& medium, double r, const char* who) {
  if (!(r > 0.0 && r <= medium.outer_radius()))
    throw DomainError(std::string(who) + ": radius outside (0, R_o]");
}

}  // namespace

RadialState integrate_regular(const Medium& medium, double omega, int l, double r_end,
                              const OracleOptions& opt) {
  check_radius(medium, r_end, "oracle");
  const RadialOperator op(medium, omega, l);
  const double rd = center_radius(medium, opt);
  if (r_end < rd) throw DomainError("oracle: r_end below R_delta");
  const Vec2 y = march(op, radial_mesh(medium, op, rd, r_end, opt), regular_start(medium, omega, l, opt), nullptr);
  return {y[0], y[1]};
}

RadialState integrate_surface(const Medium& medium, double omega, int l, double r_end,
                              const OracleOptions& opt) {
  check_radius(medium, r_end, "oracle");
  const RadialOperator op(medium, omega, l);
  const Vec2 y = march(op, radial_mesh(medium, op, medium.outer_radius(), r_end, opt),
                       surface_start(medium, omega), nullptr);
  return {y[0], y[1]};
}

Complex direct_surface_response(const Medium& medium, double source_radius, double omega, int l,
                                const OracleOptions& opt) {
  if (!(source_radius > medium.core_radius() && source_radius <= medium.outer_radius()))
    throw DomainError("oracle: source radius outside (r_core, R_o]");
  const RadialState in = integrate_regular(medium, omega, l, source_radius, opt);
  const RadialState out = integrate_surface(medium, omega, l, source_radius, opt);
  const Complex wronskian = in.p * out.flux - in.flux * out.p;
  const double scale = std::abs(in.p * out.flux) + std::abs(in.flux * out.p);
  if (std::abs(wronskian) < 1e-13 * scale) {
    std::ostringstream os;
    os << "oracle: two-point solve is singular at omega = " << omega
       << " (condition estimate " << scale / std::abs(wronskian) << ")";
    throw NumericalError(os.str());
  }
  return in.p / wronskian;
}

RadialSolve solve_radial(const Medium& medium, double source_radius, double omega, int l,
                         const OracleOptions& opt) {
  if (!(source_radius > medium.core_radius() && source_radius <= medium.outer_radius()))
    throw DomainError("oracle: source radius outside (r_core, R_o]");
  const RadialOperator op(medium, omega, l);
  const double rd = center_radius(medium, opt);
  const std::vector<double> lower = radial_mesh(medium, op, rd, source_radius, opt);
  const std::vector<double> upper = radial_mesh(medium, op, medium.outer_radius(), source_radius, opt);
  std::vector<Vec2> yin, yout;
  const Vec2 in = march(op, lower, regular_start(medium, omega, l, opt), &yin);
  const Vec2 out = march(op, upper, surface_start(medium, omega), &yout);
  const Complex w = in[0] * out[1] - in[1] * out[0];

  RadialSolve s;
  s.omega = omega;
  s.l = l;
  s.source_radius = source_radius;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    s.r.push_back(lower[i]);
    s.p.push_back(yin[i][0] * out[0] / w);
    s.r2_dp.push_back(yin[i][1] * out[0] / w);
  }
  for (std::size_t i = upper.size(); i-- > 0;) {
    if (upper[i] == source_radius) continue;
    s.r.push_back(upper[i]);
    s.p.push_back(yout[i][0] * in[0] / w);
    s.r2_dp.push_back(yout[i][1] * in[0] / w);
  }
  // the source radius belongs to the upper branch when it sits at R_o
  s.surface_value = source_radius == medium.outer_radius() ? in[0] / w : s.p.back();

  const double ro = medium.outer_radius();
  const Complex p_top = s.p.back();
  const Complex dp_top = s.r2_dp.back() / (ro * ro);
  const Complex robin = 1.0 / ro + kI * medium.kappa() * omega / medium.epsilon();
  s.surface_residual = std::abs(dp_top - robin * p_top) / std::max(std::abs(dp_top), std::abs(robin * p_top));
  const double k0 = omega / (medium.epsilon() * medium.speed(0.0));
  const BesselValue jv = spherical_bessel_j(l, k0 * rd);
  const Complex p0 = s.p.front();
  const Complex dp0 = s.r2_dp.front() / (rd * rd);
  s.center_residual = std::abs(jv.j * dp0 - k0 * jv.dj * p0) /
                      std::max(std::abs(jv.j * dp0), std::abs(k0 * jv.dj * p0));
  return s;
}

std::vector<double> direct_eigenfrequencies(const Medium& medium, int l, double omega_lo,
                                            double omega_hi, double tol, const OracleOptions& opt) {
  if (medium.kappa() != 0.0) throw ConfigError("direct eigenfrequencies need a lossless medium (kappa = 0)");
  if (!(omega_lo > 0.0 && omega_hi > omega_lo)) throw ConfigError("direct eigenfrequencies: bad window");
  const double ro = medium.outer_radius();
  auto det = [&](double w) {
    const RadialState s = integrate_regular(medium, w, l, ro, opt);
    // p'(R_o) - p(R_o) / R_o, scaled to remove the arbitrary normalization
    const double p = s.p.real();
    const double dp = s.flux.real() / (ro * ro);
    return (dp - p / ro) / std::hypot(p * w / medium.epsilon(), dp);
  };
  const double spacing = kPi * medium.epsilon() / medium.travel_time_to_surface(0.0);
  const int samples = std::max(2, static_cast<int>(std::ceil((omega_hi - omega_lo) / (spacing / 16.0))));
  std::vector<double> roots;
  double w_prev = omega_lo;
  double d_prev = det(w_prev);
  for (int i = 1; i <= samples; ++i) {
    const double w = omega_lo + (omega_hi - omega_lo) * i / samples;
    const double d = det(w);
    if (d == 0.0) {
      roots.push_back(w);
    } else if (d_prev != 0.0 && (d > 0.0) != (d_prev > 0.0)) {
      double a = w_prev, b = w, fa = d_prev;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = det(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    w_prev = w;
    d_prev = d;
  }
  return roots;
}

WkbErrorReport wkb_error_report(const MediumFactory& make_medium, const std::vector<double>& omegas,
                                const std::vector<int>& ls, const std::vector<double>& epsilons,
                                int threads, const OracleOptions& opt) {
  WkbErrorReport report;
  report.epsilons = epsilons;
  const std::size_t per_eps = omegas.size() * ls.size();
  report.rows.resize(epsilons.size() * per_eps);
  std::vector<Complex> wkb(report.rows.size()), exact(report.rows.size());
  std::vector<Medium> media;
  for (double eps : epsilons) media.push_back(make_medium(eps));
  parallel_for(report.rows.size(), threads, [&](std::size_t idx) {
    const std::size_t e = idx / per_eps;
    const double w = omegas[(idx % per_eps) / ls.size()];
    const int l = ls[idx % ls.size()];
    const Medium& m = media[e];
    wkb[idx] = response_per_unit_source(m, w, reflection_fundamental(m, w, l));
    exact[idx] = direct_surface_response(m, m.outer_radius(), w, l, opt);
    report.rows[idx] = {epsilons[e], w, l, std::abs(wkb[idx] - exact[idx]) / std::abs(exact[idx])};
  });
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = e * per_eps; i < (e + 1) * per_eps; ++i) {
      num += std::norm(wkb[i] - exact[i]);
      den += std::norm(exact[i]);
    }
    report.aggregate_error.push_back(std::sqrt(num / den));
  }
  if (epsilons.size() >= 2) report.fitted_order = loglog_slope(epsilons, report.aggregate_error);
  return report;
}

}  // namespace gadi
