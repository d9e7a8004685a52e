// Gauss-Legendre rules.
#pragma once

#include <Eigen/Dense>

namespace gadi {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch); exact for
// polynomials of degree 2n - 1.
QuadratureRule gauss_legendre(int n);

// Same rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Composite rule: `panels` equal panels on [a, b], `order` points each.
QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b);

template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

}  // namespace gadi
