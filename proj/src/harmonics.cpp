#include "gadi/harmonics.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace gadi {

ModeIndex ModeIndex::from_flat(int index) {
  const int l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(index))));
  return {l, index - l * l - l};
}

double legendre(int l, double x) { return associated_legendre(l, 0, x); }

double associated_legendre(int l, int m, double x) {
  if (l < 0 || std::abs(m) > l) throw DomainError("associated_legendre: need |m| <= l");
  if (std::abs(x) > 1.0) throw DomainError("associated_legendre: |x| > 1");
  if (m < 0) {
    // P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m
    const int mm = -m;
    double ratio = 1.0;
    for (int k = l - mm + 1; k <= l + mm; ++k) ratio /= k;
    return ((mm % 2) ? -1.0 : 1.0) * ratio * associated_legendre(l, mm, x);
  }
  // diagonal P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
  double pmm = 1.0;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * s;
  if (l == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pm1;
  double pl = 0.0;
  for (int k = m + 2; k <= l; ++k) {
    pl = ((2.0 * k - 1.0) * x * pm1 - (k + m - 1.0) * pmm) / (k - m);
    pmm = pm1;
    pm1 = pl;
  }
  return pl;
}

namespace {

double normalization(int l, int m) {
  // sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!)
  double ratio = 1.0;
  const int am = std::abs(m);
  for (int k = l - am + 1; k <= l + am; ++k) ratio /= k;
  if (m < 0) ratio = 1.0 / ratio;
  return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
}

}  // namespace

Complex spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw DomainError("spherical_harmonic: need |m| <= l");
  const double value = normalization(l, m) * associated_legendre(l, m, std::cos(theta));
  return std::polar(value, m * phi);
}

double real_spherical_harmonic(int l, int m, double theta, double phi) {
  if (m == 0) return spherical_harmonic(l, 0, theta, phi).real();
  const Complex y = spherical_harmonic(l, std::abs(m), theta, phi);
  const double sign = (std::abs(m) % 2) ? -1.0 : 1.0;
  return std::sqrt(2.0) * sign * (m > 0 ? y.real() : y.imag());
}

AngularGrid::AngularGrid(int n_theta, int n_phi) : n_phi_(n_phi) {
  if (n_theta < 1 || n_phi < 1) throw ConfigError("AngularGrid: need positive node counts");
  const QuadratureRule rule = gauss_legendre(n_theta);
  cos_theta_ = rule.nodes;
  weights_ = rule.weights;
  theta_ = cos_theta_.array().acos().matrix();
}

AngularGrid AngularGrid::for_degree(int l_max) { return AngularGrid(l_max + 1, 2 * l_max + 1); }

int AngularGrid::resolved_degree() const {
  return std::min(n_theta() - 1, (n_phi_ - 1) / 2);
}

double WeightTable::degree_sum(int l) const {
  double acc = 0.0;
  for (int m = -l; m <= l; ++m) acc += (*this)(l, m);
  return acc;
}

namespace {

void require_grid(const AngularGrid& grid, int l_max, const char* who) {
  if (l_max < 0) throw DomainError(std::string(who) + ": l_max must be >= 0");
  if (grid.resolved_degree() < l_max)
    throw ConfigError(std::string(who) + ": angular grid resolves degree " +
                      std::to_string(grid.resolved_degree()) + " < l_max = " +
                      std::to_string(l_max) + " (need n_theta >= l_max+1, n_phi >= 2 l_max+1)");
}

}  // namespace

HarmonicTable project_source(const AngularFunction& g, int l_max, const AngularGrid& grid) {
  require_grid(grid, l_max, "project_source");
  HarmonicTable table(l_max);
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const double th = grid.theta(i);
      const double ph = grid.phi(j);
      const Complex value = g(th, ph) * grid.weight(i);
      for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m)
          table(l, m) += std::conj(spherical_harmonic(l, m, th, ph)) * value;
    }
  }
  return table;
}

WeightTable angular_weights(const AngularDensity& density, int l_max, const AngularGrid& grid) {
  require_grid(grid, l_max, "angular_weights");
  WeightTable table(l_max);
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const double th = grid.theta(i);
      const double ph = grid.phi(j);
      const double g = density(th, ph);
      if (g < 0.0)
        throw DomainError("angular_weights: negative source density at theta = " +
                          std::to_string(th) + ", phi = " + std::to_string(ph));
      for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m)
          table(l, m) += std::norm(spherical_harmonic(l, m, th, ph)) * g * grid.weight(i);
    }
  }
  return table;
}

Eigen::VectorXd legendre_expand(const Eigen::VectorXd& coefficients, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index l = 0; l < coefficients.size(); ++l)
      out[i] += coefficients[l] * legendre(static_cast<int>(l), x[i]);
  return out;
}

double legendre_project(const Eigen::VectorXd& samples, const QuadratureRule& rule, int l) {
  if (2 * rule.size() - 1 < 2 * l)
    throw ConfigError("legendre_project: " + std::to_string(rule.size()) +
                      "-point rule is exact only to degree " +
                      std::to_string(2 * rule.size() - 1) + " < 2 l = " + std::to_string(2 * l));
  if (samples.size() != rule.size())
    throw ContractError("legendre_project: sample count does not match the quadrature rule");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.size(); ++i)
    acc += rule.weights[i] * samples[i] * legendre(l, rule.nodes[i]);
  return 0.5 * (2.0 * l + 1.0) * acc;
}

Eigen::VectorXd legendre_project_all(const Eigen::VectorXd& samples, const QuadratureRule& rule,
                                     int l_max) {
  Eigen::VectorXd out(l_max + 1);
  for (int l = 0; l <= l_max; ++l) out[l] = legendre_project(samples, rule, l);
  return out;
}

}  // namespace gadi
