#pragma once

#include "fraclab/domains.hpp"
#include "fraclab/fractional_laplacian.hpp"
#include "fraclab/nonlinearity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fraclab {

struct SolverConfig {
  double residual_tol = 1e-10;  ///< sup norm of the discrete residual
  int max_newton_iters = 50;
  double damping = 0.5;  ///< backtracking factor of the line search
  enum class Guess { HarmonicExtension, Ramp, Supplied };
  Guess initial_guess = Guess::Ramp;
  Eigen::VectorXd supplied;  ///< used with Guess::Supplied, one value per unknown
};

struct SolveLog {
  std::vector<double> residual_history;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<std::string, double>> diagnostics;
};

struct SolveResult {
  GridFunction u;
  SolveLog log;
};

/// Solve op(u) = f(u) on the interior lattice of omega with exterior data
/// phi, by damped Newton on F(U) = A U + g(phi) - f(U). Grid nodes outside
/// omega carry phi; the returned function has exterior model phi.
SolveResult solve_dirichlet(const FracParams& p, const DomainSpec& omega,
                            const ExteriorModel& phi, const Nonlinearity& f, const Grid& grid,
                            const QuadratureSpec& q, const SolverConfig& cfg);

/// Truncated layer problem on (-L, L): exterior fixed at -1 below -L and +1
/// above L. The log carries boundary-layer diagnostics |u(+-(L-m)) -+ 1| for
/// a sweep of margins m, and the measured slab threshold for a given delta.
SolveResult solve_layer_1d(const FracParams& p, double L, const Nonlinearity& f, const Grid& grid,
                           const QuadratureSpec& q, const SolverConfig& cfg);

/// A-posteriori consistency: max of |op(u) - f(u)| over probe points,
/// evaluated through the pointwise quadrature rather than the assembled
/// system.
double residual_field_max(const FracParams& p, const GridFunction& u, const Nonlinearity& f,
                          const std::vector<Eigen::VectorXd>& probes, const QuadratureSpec& q);

/// The step exterior model of the layer problem.
ExteriorModel layer_exterior(double L);

}  // namespace fraclab
