#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace fraclab {

/// Nodes and weights of a quadrature rule on a reference interval.
struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2m-1.
const QuadRule& gauss_legendre(int m);

/// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1].
/// Requires alpha, beta > -1. The weight function is folded into the
/// returned weights, so sum_i w_i f(x_i) ~ int (1-x)^a (1+x)^b f(x) dx.
QuadRule gauss_jacobi(int m, double alpha, double beta);

/// Integrate f over [a, b] with an m-point Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int m) {
  const QuadRule& rule = gauss_legendre(m);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

/// Breakpoints a = r_0 < r_1 < ... < r_k = b growing geometrically by
/// `ratio`, with panel widths capped at `max_width` (0 = no cap).
std::vector<double> geometric_panels(double a, double b, double ratio, double max_width = 0.0);

/// Adaptive Simpson on [a, b]; used where no structure is known.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

}  // namespace fraclab
