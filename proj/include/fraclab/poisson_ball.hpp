#pragma once

#include "fraclab/domains.hpp"
#include "fraclab/fractional_laplacian.hpp"
#include "fraclab/grid_function.hpp"
#include "fraclab/report.hpp"

#include <cstdint>

namespace fraclab {

/// Ball average int_{|y-center|>r} P_r(y-center, x-center) u_plus(y) dy at a
/// single point with |x - center| < r. u_plus must be nonnegative.
double poisson_extension_at(const FracParams& p, const GridFunction& u_plus,
                            const Eigen::VectorXd& center, double r, const Eigen::VectorXd& x,
                            double tol = 1e-8);

/// Replace values inside B_r(center) by the Poisson average of the exterior
/// data; lattice values and the exterior model outside the ball are kept.
GridFunction harmonic_replacement(const FracParams& p, const GridFunction& u_plus,
                                  const Eigen::VectorXd& center, double r, double tol = 1e-8);

/// Compares u+ against its ball replacement at low-discrepancy probe points
/// inside B_{fraction * r}(center): passes when min(replacement - u+) is at
/// least -tolerance. The default fraction keeps probes off the sphere where
/// grid-sampled data cannot resolve the boundary layer.
VerificationReport check_subharmonic_dominance(const FracParams& p, const GridFunction& u,
                                               const Eigen::VectorXd& center, double r,
                                               int probes, double tolerance,
                                               double probe_radius_fraction = 0.95);

/// (c0/c_ns) r^(2s) op(u)(xbar)
///   + c0 r^(2s) int_{|y-xbar|>r} |y-xbar|^(-n-2s) u(y) dy - u(xbar).
/// Nonnegative up to quadrature error when xbar is a global maximum.
double average_inequality_residual(const FracParams& p, const GridFunction& u,
                                   const Eigen::VectorXd& xbar, double r,
                                   const QuadratureSpec& q);

struct ContractionResult {
  double mass = 0.0;         ///< estimate, clamped to [0, 1]
  double half_width = 0.0;   ///< 95% confidence half-width
  double lower_bound = 0.0;  ///< max(0, mass - half_width)
  std::vector<double> shell_mass;
};

/// Exterior-kernel mass carried by the complement of D:
///   b_ns int_{D^c, |y-center|>r} r^(2s) (|y-center|^2-r^2)^(-s) |y-center|^(-n) dy
/// accumulated over dyadic shells k = k0..kmax. The innermost shell (k = 0)
/// absorbs the ring singularity with Gauss-Jacobi radial nodes; membership
/// is Monte-Carlo with per-shell seeds derived from `seed`.
ContractionResult contraction_mass(const FracParams& p, const DomainSpec& D,
                                   const Eigen::VectorXd& center, double r, int k0, int kmax,
                                   int samples_per_shell, std::uint64_t seed);

}  // namespace fraclab
