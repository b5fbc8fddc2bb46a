#pragma once

#include <Eigen/Core>

namespace fraclab {

/// Dimension, fractional order and the normalization constants used by the
/// kernels. Immutable after construction through make_params().
struct FracParams {
  int n = 1;         ///< spatial dimension
  double s = 0.5;    ///< fractional order, strictly inside (0, 1)
  double c_ns = 0;   ///< operator constant: symbol of the operator is |xi|^(2s)
  double b_ns = 0;   ///< Poisson-kernel constant Gamma(n/2) pi^(-n/2-1) sin(pi s)
  double c0 = 0;     ///< average-weight constant 2s / omega_{n-1}
  double omega = 0;  ///< surface measure of the unit sphere S^{n-1}
};

/// Build parameters for dimension n >= 1 and order s in (0, 1).
/// Throws std::invalid_argument outside that range.
FracParams make_params(int n, double s);

/// Poisson kernel of the ball of radius r centered at the origin:
///   P_r(y, x) = b_ns ((r^2-|x|^2)/(|y|^2-r^2))^s |x-y|^(-n)   for |y| > r,
/// and 0 for |y| < r. Coordinates are relative to the ball center.
/// Throws for |x| >= r and for |y| within a relative band of the singular
/// ring |y| = r.
double poisson_kernel(const FracParams& p, double r, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y);

/// Kernel reproducing the value at the ball center from exterior data:
///   E_r(x) = b_ns r^(2s) (|x|^2-r^2)^(-s) |x|^(-n)   for |x| > r,
/// 0 for |x| < r; integrates to exactly 1 over {|x| > r}.
double exterior_kernel(const FracParams& p, double r, const Eigen::VectorXd& x);

/// Radial form of exterior_kernel (density at |x| = rho).
double exterior_kernel_radial(const FracParams& p, double r, double rho);

/// Relative half-width of the rejected band around the singular ring.
inline constexpr double kSingularRingBand = 1e-12;

/// Numerical mass of the exterior kernel over {|x| > r}; equals 1 up to
/// quadrature error. Exposed so normalization can be checked directly.
double exterior_kernel_mass(const FracParams& p, double r, double tol = 1e-9);

/// Numerical mass of the Poisson kernel over {|y| > r} for |x| < r; equals 1
/// up to quadrature error.
double poisson_kernel_mass(const FracParams& p, double r, const Eigen::VectorXd& x,
                           double tol = 1e-9);

}  // namespace fraclab
