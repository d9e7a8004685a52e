#include "gadi/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

namespace gadi {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  // Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();

  // One Newton polish per node keeps the rule at full precision for n ~ 100.
  auto legendre_and_derivative = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = n == 1 ? x : p1;
    const double pnm1 = n == 1 ? 1.0 : p0;
    return std::pair{pn, n * (x * pn - pnm1) / (x * x - 1.0)};
  };
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    const auto [pn, dp] = legendre_and_derivative(x);
    x -= pn / dp;
    const double dpx = legendre_and_derivative(x).second;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dpx * dpx);
  }
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  rule.nodes = (half * rule.nodes.array() + mid).matrix();
  rule.weights *= half;
  return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be positive");
  const QuadratureRule base = gauss_legendre(order);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<Eigen::Index>(panels) * order);
  rule.weights.resize(rule.nodes.size());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (int i = 0; i < order; ++i) {
      rule.nodes[p * order + i] = lo + 0.5 * width * (base.nodes[i] + 1.0);
      rule.weights[p * order + i] = 0.5 * width * base.weights[i];
    }
  }
  return rule;
}

}  // namespace gadi
