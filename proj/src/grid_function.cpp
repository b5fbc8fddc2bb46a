#include "fraclab/grid_function.hpp"

#include "fraclab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fraclab {

namespace {

// Reject closures that visibly exceed their declared growth bound; probed at
// log-spaced radii along the axes, well outside the hull and slab.
void spot_check_growth(const Grid& grid, const ExteriorModel& ext) {
  const int n = grid.dim();
  const double reach = grid.hull_reach(Eigen::VectorXd::Zero(n));
  const double start = 2.0 * std::max({reach, ext.slab(), 1.0});
  const double bound = std::max(ext.bound_const(), 1e-300);
  for (int j = 0; j < 12; ++j) {
    const double rad = start * std::pow(2.0, j);
    for (int axis = 0; axis < n; ++axis) {
      for (double sign : {-1.0, 1.0}) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        y[axis] = sign * rad;
        const double v = ext(y);
        if (!std::isfinite(v) ||
            std::abs(v) > 4.0 * bound * std::pow(1.0 + rad, std::max(ext.growth(), 0.0)))
          throw std::invalid_argument(
              "GridFunction: exterior model exceeds its declared growth bound");
      }
    }
  }
}

}  // namespace

GridFunction::GridFunction(Grid grid, Eigen::VectorXd values, ExteriorModel exterior,
                           std::string smoothness_tag)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      exterior_(std::move(exterior)),
      smoothness_tag_(std::move(smoothness_tag)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("GridFunction: value count does not match grid");
  if (!values_.allFinite())
    throw std::invalid_argument("GridFunction: non-finite lattice values");
  spot_check_growth(grid_, exterior_);
}

double GridFunction::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != grid_.dim()) throw std::invalid_argument("evaluate: wrong dimension");
  double acc = 0.0;
  const bool inside = grid_.for_each_corner(
      x, [&](Eigen::Index flat, double w) { acc += w * values_[flat]; });
  return inside ? acc : exterior_(x);
}

double GridFunction::hull_mismatch() const {
  double worst = 0.0;
  const int n = grid_.dim();
  for (Eigen::Index f = 0; f < grid_.size(); ++f) {
    const Eigen::VectorXi idx = grid_.unflatten(f);
    bool boundary = false;
    for (int i = 0; i < n; ++i)
      if (idx[i] == 0 || idx[i] == grid_.shape[i] - 1) boundary = true;
    if (!boundary) continue;
    worst = std::max(worst, std::abs(values_[f] - exterior_(grid_.node(idx))));
  }
  return worst;
}

GridFunction sample_function(const Grid& grid,
                             const std::function<double(const Eigen::VectorXd&)>& f,
                             ExteriorModel exterior, std::string smoothness_tag) {
  Eigen::VectorXd values(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) values[i] = f(grid.node(i));
  return GridFunction(grid, std::move(values), std::move(exterior), std::move(smoothness_tag));
}

GridFunction sample_function(const Grid& grid, const ExteriorModel& model,
                             std::string smoothness_tag) {
  return sample_function(
      grid, [&model](const Eigen::VectorXd& x) { return model(x); }, model,
      std::move(smoothness_tag));
}

GridFunction shift_vertical(const GridFunction& u, double tau) {
  Grid g = u.grid();
  g.origin[g.dim() - 1] -= tau;
  return GridFunction(g, u.values(), u.exterior().shifted_vertical(tau), u.smoothness_tag());
}

GridFunction difference(const GridFunction& u, const GridFunction& v) {
  const Grid& a = u.grid();
  const Grid& b = v.grid();
  if (!a.same_lattice(b))
    throw std::invalid_argument("difference: grids do not share a lattice");

  const int n = a.dim();
  Eigen::VectorXd origin(n);
  Eigen::VectorXi shape(n);
  for (int i = 0; i < n; ++i) {
    const double h = a.spacing[i];
    const long off = std::lround((b.origin[i] - a.origin[i]) / h);
    const long lo = std::min(0L, off);
    const long hi_a = a.shape[i] - 1;
    const long hi_b = off + b.shape[i] - 1;
    const long hi = std::max(hi_a, hi_b);
    origin[i] = a.origin[i] + static_cast<double>(lo) * h;
    shape[i] = static_cast<int>(hi - lo + 1);
  }
  Grid cover(origin, a.spacing, shape);

  Eigen::VectorXd values(cover.size());
  for (Eigen::Index f = 0; f < cover.size(); ++f) {
    const Eigen::VectorXd x = cover.node(f);
    values[f] = u.evaluate(x) - v.evaluate(x);
  }
  return GridFunction(cover, std::move(values),
                      ExteriorModel::difference(u.exterior(), v.exterior()));
}

GridFunction positive_part(const GridFunction& u) {
  return GridFunction(u.grid(), u.values().cwiseMax(0.0), u.exterior().positive_part(),
                      u.smoothness_tag());
}

TailGateReport l2s_gate(const FracParams& p, const GridFunction& u, int k_lo, int k_hi) {
  TailGateReport rep;
  rep.growth_admissible = u.exterior().growth() < 2.0 * p.s;

  const int n = u.grid().dim();
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
  const double base = std::max(1.0, u.grid().hull_reach(center));
  auto weighted = [&](const Eigen::VectorXd& y) {
    return std::abs(u.evaluate(y)) * std::pow(1.0 + y.norm(), -(n + 2.0 * p.s));
  };

  for (int k = k_lo; k <= k_hi; ++k) {
    const double lo = base * std::pow(2.0, k), hi = 2.0 * lo;
    double mass = 0.0;
    const auto panels = geometric_panels(lo, hi, 1.5);
    for (size_t j = 0; j + 1 < panels.size(); ++j) {
      mass += integrate_gl(
          [&](double rho) {
            if (n == 1) {
              Eigen::VectorXd y(1);
              y << rho;
              double acc = weighted(y);
              y << -rho;
              return acc + weighted(y);
            }
            const int m = 32;
            double acc = 0.0;
            Eigen::VectorXd y(2);
            for (int a = 0; a < m; ++a) {
              const double th = 2.0 * std::numbers::pi * (a + 0.5) / m;
              y << rho * std::cos(th), rho * std::sin(th);
              acc += weighted(y);
            }
            return acc * 2.0 * std::numbers::pi / m * rho;
          },
          panels[j], panels[j + 1], 8);
    }
    rep.annulus_mass.push_back(mass);
  }

  rep.worst_tail_ratio = 0.0;
  const size_t half = rep.annulus_mass.size() / 2;
  for (size_t i = half; i + 1 < rep.annulus_mass.size(); ++i) {
    if (rep.annulus_mass[i] <= 1e-300) continue;
    rep.worst_tail_ratio = std::max(rep.worst_tail_ratio,
                                    rep.annulus_mass[i + 1] / rep.annulus_mass[i]);
  }
  rep.converging = rep.growth_admissible && rep.worst_tail_ratio < 1.0;
  return rep;
}

}  // namespace fraclab
