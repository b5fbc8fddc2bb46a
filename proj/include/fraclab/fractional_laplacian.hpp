#pragma once

#include "fraclab/grid_function.hpp"
#include "fraclab/params.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace fraclab {

/// Controls for the singular-integral quadrature. The evaluation splits the
/// symmetrized second-difference form into an inner ball (handled through a
/// local quadratic model, which the C^{1,1} regularity bounds), a middle
/// annulus resolved by product radial x angular panels, and a far tail closed
/// against the exterior model.
struct QuadratureSpec {
  double rho_inner = 0.0;   ///< inner split radius; 0 = 2 * max grid spacing
  double r_outer = 0.0;     ///< forced annulus end; 0 = auto from the hull
  int nodes_radial = 12;    ///< Gauss-Legendre nodes per radial panel
  int nodes_angular = 64;   ///< angular samples on the full circle (n = 2)
  double panel_ratio = 2.0; ///< geometric growth of radial panels
  double tol = 1e-3;        ///< target relative error, used for reporting
  double tail_cap = 0.0;    ///< forced tail truncation; 0 = auto
  bool prefer_aligned = true;  ///< use the exact lattice ladder in 1D
};

struct EvalInfo {
  double value = 0.0;
  double err_estimate = 0.0;  ///< heuristic absolute error bound
  bool tol_met = true;
};

/// Pointwise evaluation of the operator at x. Requires x inside the grid
/// hull with margin at least the inner split radius, and an exterior model
/// whose declared growth is below 2s.
double frac_laplacian_at(const FracParams& p, const GridFunction& u, const Eigen::VectorXd& x,
                         const QuadratureSpec& q);

EvalInfo frac_laplacian_at_info(const FracParams& p, const GridFunction& u,
                                const Eigen::VectorXd& x, const QuadratureSpec& q);

/// Batched evaluation; results are identical to pointwise calls regardless
/// of the thread count (disjoint output slots, fixed per-point summation).
std::vector<double> frac_laplacian_field(const FracParams& p, const GridFunction& u,
                                         const std::vector<Eigen::VectorXd>& points,
                                         const QuadratureSpec& q, int threads = 1);

/// Dense linear action of the operator on interior unknowns plus the load
/// functional carrying exterior data. Rows are the grid nodes selected by
/// `interior`; for values U on those nodes and exterior data phi,
/// matrix * U + load(phi) reproduces frac_laplacian_at at each row node.
class AssembledOperator {
 public:
  AssembledOperator(FracParams p, Grid grid, std::function<bool(const Eigen::VectorXd&)> interior,
                    QuadratureSpec q, ExteriorModel exterior_proto);

  const Eigen::MatrixXd& matrix() const { return A_; }
  const std::vector<Eigen::Index>& unknowns() const { return unknowns_; }
  const Grid& grid() const { return grid_; }
  const FracParams& params() const { return p_; }
  const QuadratureSpec& quad() const { return q_; }

  /// Exterior-load vector g(phi). The walk geometry is the one fixed at
  /// assembly time, so phi should share the prototype's structure.
  Eigen::VectorXd load(const ExteriorModel& phi) const;

  /// Row index of a flat grid node, or -1 if it is not an unknown.
  Eigen::Index row_of(Eigen::Index flat) const { return lookup_[flat]; }

 private:
  FracParams p_;
  Grid grid_;
  QuadratureSpec q_;
  ExteriorModel proto_;
  std::vector<Eigen::Index> unknowns_;
  std::vector<Eigen::Index> lookup_;
  Eigen::MatrixXd A_;
};

/// Convenience wrapper matching the operation contract.
AssembledOperator assemble_linear_operator(const FracParams& p, const Grid& grid,
                                           const std::function<bool(const Eigen::VectorXd&)>& interior,
                                           const QuadratureSpec& q,
                                           const ExteriorModel& exterior_proto);

/// Export the dense matrix as CSV triplets (row, col, value) for debugging.
void write_matrix_csv(const Eigen::MatrixXd& A, const std::string& path);

}  // namespace fraclab
