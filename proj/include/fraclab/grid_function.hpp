#pragma once

#include "fraclab/exterior.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/params.hpp"

#include <string>
#include <vector>

namespace fraclab {

/// Globally defined function: multilinear interpolation of lattice values
/// inside the grid hull, an analytic ExteriorModel outside. Immutable.
class GridFunction {
 public:
  GridFunction(Grid grid, Eigen::VectorXd values, ExteriorModel exterior,
               std::string smoothness_tag = "");

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  const ExteriorModel& exterior() const { return exterior_; }
  const std::string& smoothness_tag() const { return smoothness_tag_; }

  /// Total evaluation; never fails, never returns non-finite values.
  double evaluate(const Eigen::VectorXd& x) const;

  double value_at(Eigen::Index flat) const { return values_[flat]; }
  double value_at(const Eigen::VectorXi& idx) const { return values_[grid_.flatten(idx)]; }

  /// Worst absolute gap between hull-boundary node values and the exterior
  /// model at those nodes. Reported, never fatal.
  double hull_mismatch() const;

 private:
  Grid grid_;
  Eigen::VectorXd values_;
  ExteriorModel exterior_;
  std::string smoothness_tag_;
};

/// Sample a callable on the grid nodes.
GridFunction sample_function(const Grid& grid, const std::function<double(const Eigen::VectorXd&)>& f,
                             ExteriorModel exterior, std::string smoothness_tag = "");

/// Sample the exterior model itself on the grid (for globally analytic data).
GridFunction sample_function(const Grid& grid, const ExteriorModel& model,
                             std::string smoothness_tag = "");

/// u^tau(x) = u(x', x_n + tau). Implemented as an exact origin translation,
/// so no resampling error for any tau.
GridFunction shift_vertical(const GridFunction& u, double tau);

/// u - v on the common lattice (grids must be translates of one lattice);
/// values exact at lattice points, exteriors combined kind-preservingly.
GridFunction difference(const GridFunction& u, const GridFunction& v);

/// max(u, 0) nodewise with a kind-preserving exterior.
GridFunction positive_part(const GridFunction& u);

/// Weighted-tail convergence report for the integrability gate: masses of
/// |u(y)| (1+|y|)^(-n-2s) over dyadic annuli and their successive ratios.
struct TailGateReport {
  bool growth_admissible = false;  ///< declared growth < 2s
  std::vector<double> annulus_mass;
  double worst_tail_ratio = 0.0;
  bool converging = false;
};

TailGateReport l2s_gate(const FracParams& p, const GridFunction& u, int k_lo = 0, int k_hi = 10);

}  // namespace fraclab
