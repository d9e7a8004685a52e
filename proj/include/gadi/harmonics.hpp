// Spherical harmonics, Legendre utilities and angular quadrature.
//
// Y_{l,m}(theta, phi) = sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) P_l^m(cos theta) e^{i m phi}
// with the Condon-Shortley phase carried by P_l^m, so that
// P_1^1(x) = -sqrt(1 - x^2) and Y_{l,-m} = (-1)^m conj(Y_{l,m}).
#pragma once

#include <functional>

#include "gadi/core.hpp"
#include "gadi/quadrature.hpp"

namespace gadi {

struct ModeIndex {
  int l = 0;
  int m = 0;

  // Flat position of (l, m) in a table holding all modes up to some l_max.
  static int flat(int l, int m) { return l * l + l + m; }
  static int count(int l_max) { return (l_max + 1) * (l_max + 1); }
  static ModeIndex from_flat(int index);
};

double legendre(int l, double x);
double associated_legendre(int l, int m, double x);
Complex spherical_harmonic(int l, int m, double theta, double phi);
// Orthonormal real basis built from Re/Im of Y_{l,|m|}.
double real_spherical_harmonic(int l, int m, double theta, double phi);

// Gauss-Legendre in cos(theta) times a uniform rule in phi.
class AngularGrid {
 public:
  AngularGrid(int n_theta, int n_phi);
  // Smallest grid integrating products Y_{l,m} Y_{l',m'} exactly for l, l' <= l_max.
  static AngularGrid for_degree(int l_max);

  int n_theta() const { return static_cast<int>(cos_theta_.size()); }
  int n_phi() const { return n_phi_; }
  double theta(int i) const { return theta_[i]; }
  double phi(int j) const { return 2.0 * kPi * j / n_phi_; }
  double weight(int i) const { return weights_[i] * 2.0 * kPi / n_phi_; }
  const Eigen::VectorXd& theta_weights() const { return weights_; }
  // Largest l_max for which for_degree(l_max) would fit inside this grid.
  int resolved_degree() const;

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0, 0.0));
    R acc{};
    for (int i = 0; i < n_theta(); ++i)
      for (int j = 0; j < n_phi_; ++j) acc += weight(i) * f(theta_[i], phi(j));
    return acc;
  }

 private:
  Eigen::VectorXd cos_theta_;
  Eigen::VectorXd theta_;
  Eigen::VectorXd weights_;
  int n_phi_;
};

// All modes l <= l_max, stored at ModeIndex::flat(l, m).
struct HarmonicTable {
  int l_max = 0;
  Eigen::VectorXcd values;

  explicit HarmonicTable(int l_max_ = 0)
      : l_max(l_max_), values(Eigen::VectorXcd::Zero(ModeIndex::count(l_max_))) {}
  Complex& operator()(int l, int m) { return values[ModeIndex::flat(l, m)]; }
  Complex operator()(int l, int m) const { return values[ModeIndex::flat(l, m)]; }
};

struct WeightTable {
  int l_max = 0;
  Eigen::VectorXd values;

  explicit WeightTable(int l_max_ = 0)
      : l_max(l_max_), values(Eigen::VectorXd::Zero(ModeIndex::count(l_max_))) {}
  double& operator()(int l, int m) { return values[ModeIndex::flat(l, m)]; }
  double operator()(int l, int m) const { return values[ModeIndex::flat(l, m)]; }
  // sum over m of the weights of degree l
  double degree_sum(int l) const;
};

using AngularFunction = std::function<Complex(double theta, double phi)>;
using AngularDensity = std::function<double(double theta, double phi)>;

// g_{l,m} = int conj(Y_{l,m}) g sin(theta) dtheta dphi
HarmonicTable project_source(const AngularFunction& g, int l_max, const AngularGrid& grid);

// G_{l,m} = int |Y_{l,m}|^2 G sin(theta) dtheta dphi, G >= 0.
WeightTable angular_weights(const AngularDensity& density, int l_max, const AngularGrid& grid);

// C(x_i) = sum_l C_l P_l(x_i)
Eigen::VectorXd legendre_expand(const Eigen::VectorXd& coefficients, const Eigen::VectorXd& x);

// C_l = (2l+1)/2 int C(x) P_l(x) dx with the given Gauss rule in x = cos(Omega).
double legendre_project(const Eigen::VectorXd& samples, const QuadratureRule& rule, int l);
Eigen::VectorXd legendre_project_all(const Eigen::VectorXd& samples, const QuadratureRule& rule,
                                     int l_max);

}  // namespace gadi
