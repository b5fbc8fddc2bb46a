#include "fraclab/params.hpp"

#include "fraclab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraclab {

namespace {
constexpr double kPi = std::numbers::pi;
}

FracParams make_params(int n, double s) {
  if (n < 1) throw std::invalid_argument("make_params: dimension must be >= 1");
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("make_params: order s must lie strictly in (0, 1)");

  FracParams p;
  p.n = n;
  p.s = s;
  const double half_n = 0.5 * static_cast<double>(n);
  p.omega = 2.0 * std::pow(kPi, half_n) / std::tgamma(half_n);
  p.b_ns = std::tgamma(half_n) * std::pow(kPi, -(half_n + 1.0)) * std::sin(kPi * s);
  p.c0 = 2.0 * s / p.omega;
  // Normalization that turns the operator into multiplication by |xi|^(2s)
  // on plane waves; |Gamma(-s)| = Gamma(1-s)/s.
  p.c_ns = std::pow(4.0, s) * std::tgamma(half_n + s) * s /
           (std::pow(kPi, half_n) * std::tgamma(1.0 - s));
  return p;
}

double exterior_kernel_radial(const FracParams& p, double r, double rho) {
  if (!(r > 0.0)) throw std::invalid_argument("exterior_kernel: radius must be positive");
  if (std::abs(rho - r) <= kSingularRingBand * r)
    throw std::domain_error("exterior_kernel: evaluation on the singular ring |x| = r");
  if (rho < r) return 0.0;
  return p.b_ns * std::pow(r, 2.0 * p.s) * std::pow(rho * rho - r * r, -p.s) *
         std::pow(rho, -static_cast<double>(p.n));
}

double exterior_kernel(const FracParams& p, double r, const Eigen::VectorXd& x) {
  return exterior_kernel_radial(p, r, x.norm());
}

double poisson_kernel(const FracParams& p, double r, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y) {
  if (!(r > 0.0)) throw std::invalid_argument("poisson_kernel: radius must be positive");
  const double ax = x.norm(), ay = y.norm();
  if (ax >= r) throw std::domain_error("poisson_kernel: base point must satisfy |x| < r");
  if (std::abs(ay - r) <= kSingularRingBand * r)
    throw std::domain_error("poisson_kernel: evaluation on the singular ring |y| = r");
  if (ay < r) return 0.0;
  const double d = (x - y).norm();
  return p.b_ns * std::pow((r * r - ax * ax) / (ay * ay - r * r), p.s) *
         std::pow(d, -static_cast<double>(p.n));
}

namespace {

// Integrate g over the radial range (r, infinity) where g carries the edge
// factor (rho^2 - r^2)^(-s): a Gauss-Jacobi panel on [r, 2r] absorbs the
// endpoint singularity, geometric Gauss-Legendre panels follow, and the far
// field is closed with the power-law estimate `remainder(T)`.
//
// g(rho) must be smooth on (r, inf) after the (rho-r)^(-s) factor is split
// off; `smooth` receives rho and must return g(rho) * (rho - r)^s.
template <class Smooth, class Remainder>
double radial_edge_integral(double r, double s, Smooth&& smooth, Remainder&& remainder,
                            double tol) {
  const QuadRule gj = gauss_jacobi(24, 0.0, -s);
  double acc = 0.0;
  // [r, 2r]: rho = r + r(1+u)/2, weight (1+u)^(-s) folded into gj.
  const double scale = 0.5 * r;
  for (int i = 0; i < gj.nodes.size(); ++i) {
    const double t = scale * (1.0 + gj.nodes[i]);  // rho - r in (0, r)
    acc += gj.weights[i] * std::pow(scale, 1.0 - s) * smooth(r + t);
  }
  // Geometric panels [2r, T]. The far field is closed with the power-law
  // estimate `remainder(T)`, whose own relative error is O((r/T)^2); extend
  // T until that second-order defect is negligible.
  double lo = 2.0 * r;
  double rem = remainder(lo);
  auto rem_defect = [&](double T) { return std::abs(rem) * 4.0 * (r / T) * (r / T) * (1.0 + s); };
  while (rem_defect(lo) > 0.1 * tol * (std::abs(acc) + std::abs(rem))) {
    const double hi = 2.0 * lo;
    acc += integrate_gl([&](double rho) { return smooth(rho) * std::pow(rho - r, -s); }, lo, hi,
                        16);
    lo = hi;
    rem = remainder(lo);
    if (lo > 1e30 * r) break;
  }
  return acc + rem;
}

}  // namespace

double exterior_kernel_mass(const FracParams& p, double r, double tol) {
  const double s = p.s;
  const double front = p.b_ns * p.omega * std::pow(r, 2.0 * s);
  // integrand: (rho^2-r^2)^(-s) rho^(-1) = (rho-r)^(-s) * (rho+r)^(-s) rho^(-1)
  auto smooth = [&](double rho) { return std::pow(rho + r, -s) / rho; };
  auto remainder = [&](double T) {
    return std::pow(T, -2.0 * s) / (2.0 * s) * std::pow(1.0 - (r / T) * (r / T), -s);
  };
  return front * radial_edge_integral(r, s, smooth, remainder, tol);
}

double poisson_kernel_mass(const FracParams& p, double r, const Eigen::VectorXd& x, double tol) {
  const double s = p.s;
  const double ax = x.norm();
  if (ax >= r) throw std::domain_error("poisson_kernel_mass: need |x| < r");
  const double front = p.b_ns * std::pow(r * r - ax * ax, s);

  if (p.n > 2)
    throw std::invalid_argument("poisson_kernel_mass: only n = 1, 2 are supported");

  // angular average of |x - y|^(-n) over the sphere |y| = rho
  auto angular = [&](double rho) -> double {
    if (p.n == 1) {
      return std::pow(std::abs(rho - x[0]), -1.0) + std::pow(std::abs(rho + x[0]), -1.0);
    }
    const int m = 256;
    double acc = 0.0;
    Eigen::VectorXd y(p.n);
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * (static_cast<double>(j) + 0.5) / m;
      y.setZero();
      y[0] = rho * std::cos(th);
      y[1] = rho * std::sin(th);
      acc += std::pow((x - y).norm(), -static_cast<double>(p.n));
    }
    return acc * 2.0 * kPi / m;
  };

  auto smooth = [&](double rho) {
    return std::pow(rho + r, -s) * angular(rho) * std::pow(rho, static_cast<double>(p.n - 1));
  };
  auto remainder = [&](double T) {
    // |x-y| ~ rho for rho >> |x|; same far-field power law as the mass of
    // the centered kernel.
    return p.omega * std::pow(T, -2.0 * s) / (2.0 * s);
  };
  return front * radial_edge_integral(r, s, smooth, remainder, tol);
}

}  // namespace fraclab
