#include "fraclab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <map>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace fraclab {

namespace {

// Golub-Welsch: eigen-decompose the symmetric tridiagonal recurrence matrix.
// mu0 is the total mass of the weight function.
QuadRule from_recurrence(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  QuadRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(rule.nodes.size());
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

QuadRule make_gauss_legendre(int m) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(m - 1);
  for (int k = 1; k < m; ++k) {
    const double kk = static_cast<double>(k);
    sub[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  return from_recurrence(diag, sub, 2.0);
}

}  // namespace

const QuadRule& gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("gauss_legendre: need m >= 1");
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, make_gauss_legendre(m)).first;
  return it->second;
}

QuadRule gauss_jacobi(int m, double alpha, double beta) {
  if (m < 1) throw std::invalid_argument("gauss_jacobi: need m >= 1");
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  const double ab = alpha + beta;

  Eigen::VectorXd diag(m), sub(std::max(0, m - 1));
  diag[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < m; ++k) {
    const double kk = static_cast<double>(k);
    const double den = (2.0 * kk + ab) * (2.0 * kk + ab + 2.0);
    diag[k] = (beta * beta - alpha * alpha) / den;
  }
  if (m > 1) {
    // k = 1 written with the (ab+1) factor cancelled so that ab = -1
    // (both endpoints singular) stays finite.
    sub[0] = std::sqrt(4.0 * (1.0 + alpha) * (1.0 + beta) /
                       ((ab + 2.0) * (ab + 2.0) * (ab + 3.0)));
  }
  for (int k = 2; k < m; ++k) {
    const double kk = static_cast<double>(k);
    const double t = 2.0 * kk + ab;
    sub[k - 1] = std::sqrt(4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                           (t * t * (t + 1.0) * (t - 1.0)));
  }

  // mu0 = 2^(a+b+1) B(a+1, b+1)
  const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                         std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0);
  return from_recurrence(diag, sub, std::exp(log_mu0));
}

std::vector<double> geometric_panels(double a, double b, double ratio, double max_width) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("geometric_panels: need 0 < a < b");
  if (!(ratio > 1.0)) throw std::invalid_argument("geometric_panels: ratio must exceed 1");
  std::vector<double> pts{a};
  double t = a;
  while (t < b) {
    double step = t * (ratio - 1.0);
    if (max_width > 0.0 && step > max_width) step = max_width;
    t = std::min(b, t + step);
    pts.push_back(t);
  }
  return pts;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  // the second branch is a per-panel noise floor: integrands built from
  // differences of nearby samples cannot be resolved past ~1e-11 relative
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= 3e-11 * (std::abs(left) + std::abs(right)))
    return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return adaptive_step(f, a, fa, b, fb, m, fm, simpson(f, a, fa, b, fb, m, fm), tol, max_depth);
}

}  // namespace fraclab
