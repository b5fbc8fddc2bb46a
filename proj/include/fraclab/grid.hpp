#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace fraclab {

/// Uniform lattice: nodes are origin + index .* spacing, indices in
/// [0, shape) per axis, flattened row-major (last axis fastest).
struct Grid {
  Eigen::VectorXd origin;
  Eigen::VectorXd spacing;
  Eigen::VectorXi shape;

  Grid() = default;
  Grid(Eigen::VectorXd origin_, Eigen::VectorXd spacing_, Eigen::VectorXi shape_)
      : origin(std::move(origin_)), spacing(std::move(spacing_)), shape(std::move(shape_)) {
    if (origin.size() != spacing.size() || origin.size() != shape.size())
      throw std::invalid_argument("Grid: mismatched dimensions");
    for (int i = 0; i < dim(); ++i) {
      if (!(spacing[i] > 0.0)) throw std::invalid_argument("Grid: spacing must be positive");
      if (shape[i] < 2) throw std::invalid_argument("Grid: need at least 2 nodes per axis");
    }
  }

  int dim() const { return static_cast<int>(origin.size()); }

  Eigen::Index size() const {
    Eigen::Index n = 1;
    for (int i = 0; i < dim(); ++i) n *= shape[i];
    return n;
  }

  Eigen::Index flatten(const Eigen::VectorXi& idx) const {
    Eigen::Index flat = 0;
    for (int i = 0; i < dim(); ++i) flat = flat * shape[i] + idx[i];
    return flat;
  }

  Eigen::VectorXi unflatten(Eigen::Index flat) const {
    Eigen::VectorXi idx(dim());
    for (int i = dim() - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(flat % shape[i]);
      flat /= shape[i];
    }
    return idx;
  }

  Eigen::VectorXd node(const Eigen::VectorXi& idx) const {
    return origin + idx.cast<double>().cwiseProduct(spacing);
  }
  Eigen::VectorXd node(Eigen::Index flat) const { return node(unflatten(flat)); }

  Eigen::VectorXd hull_lo() const { return origin; }
  Eigen::VectorXd hull_hi() const {
    return origin + (shape.cast<double>().array() - 1.0).matrix().cwiseProduct(spacing);
  }

  bool in_hull(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd hi = hull_hi();
    for (int i = 0; i < dim(); ++i)
      if (x[i] < origin[i] || x[i] > hi[i]) return false;
    return true;
  }

  /// Distance from x to the hull boundary; negative outside the hull.
  double hull_margin(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd hi = hull_hi();
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) {
      m = std::min(m, x[i] - origin[i]);
      m = std::min(m, hi[i] - x[i]);
    }
    return m;
  }

  /// Farthest distance from x to a hull corner; every ball of this radius
  /// around x contains the whole hull.
  double hull_reach(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd lo = hull_lo(), hi = hull_hi();
    double acc = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double d = std::max(std::abs(x[i] - lo[i]), std::abs(x[i] - hi[i]));
      acc += d * d;
    }
    return std::sqrt(acc);
  }

  /// Visit the multilinear stencil of x: f(flat_index, weight) over the
  /// corners of the containing cell, weights summing to 1. Returns false
  /// (nothing visited) outside the hull. Fractions within 1e-9 of a node
  /// snap to it so lattice reads stay exact under fp round-off.
  template <class F>
  bool for_each_corner(const Eigen::VectorXd& x, F&& f) const {
    if (!in_hull(x)) return false;
    const int n = dim();
    if (n > 8) throw std::invalid_argument("Grid: dimension too large for stencil walk");
    int base[8];
    double frac[8];
    for (int i = 0; i < n; ++i) {
      const double t = (x[i] - origin[i]) / spacing[i];
      int i0 = static_cast<int>(std::floor(t));
      i0 = std::max(0, std::min(i0, shape[i] - 2));
      double fr = t - i0;
      if (fr < 1e-9) fr = 0.0;
      if (fr > 1.0 - 1e-9) fr = 1.0;
      base[i] = i0;
      frac[i] = fr;
    }
    const int corners = 1 << n;
    Eigen::VectorXi idx(n);
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        const bool hi = (c >> i) & 1;
        w *= hi ? frac[i] : 1.0 - frac[i];
        idx[i] = base[i] + (hi ? 1 : 0);
      }
      if (w != 0.0) f(flatten(idx), w);
    }
    return true;
  }

  bool same_lattice(const Grid& other, double rel = 1e-12) const {
    if (dim() != other.dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (std::abs(spacing[i] - other.spacing[i]) > rel * spacing[i]) return false;
      const double off = (other.origin[i] - origin[i]) / spacing[i];
      if (std::abs(off - std::round(off)) > rel * 1e3) return false;
    }
    return true;
  }
};

}  // namespace fraclab
