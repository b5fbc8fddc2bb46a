#pragma once

#include "fraclab/report.hpp"
#include "fraclab/rng.hpp"

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <vector>

namespace fraclab {

struct BBox {
  Eigen::VectorXd lo, hi;
};

/// Decidable membership predicate with geometry metadata. Covers half
/// spaces, slabs, boxes, ellipsoids, the periodic stripe and annulus
/// families, a thickened Archimedean spiral, and the complement /
/// intersection / translate combinators. An empty intersection is all of
/// R^n.
class DomainSpec {
 public:
  static DomainSpec full_space(int dim);
  static DomainSpec half_space(const Eigen::VectorXd& direction, double offset);
  static DomainSpec slab(int dim, int axis, double lo, double hi);
  static DomainSpec rectangle(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  static DomainSpec ellipsoid(const Eigen::VectorXd& semi_axes);
  /// { x : 2k < x_n < 2k+1 } over all integers k.
  static DomainSpec stripes(int dim);
  /// { x : 2k < |x| < 2k+1 } over k = 0, 1, 2, ...
  static DomainSpec annulus_family(int dim);
  /// Points within half_width of the curve r = a + b*theta (n = 2 only);
  /// non-overlapping turns require half_width < pi*b.
  static DomainSpec spiral_band(double a, double b, double half_width);
  static DomainSpec complement(DomainSpec inner);
  static DomainSpec intersection(std::vector<DomainSpec> members, int dim);
  static DomainSpec translate(DomainSpec inner, const Eigen::VectorXd& shift);

  int dim() const { return dim_; }
  bool contains(const Eigen::VectorXd& x) const;
  bool bounded() const { return bbox_.has_value(); }
  const std::optional<BBox>& bbox() const { return bbox_; }

  bool convex_in_xn() const { return convex_in_xn_; }
  /// Spot-check of the declared vertical convexity on random segments.
  bool spot_check_convex_in_xn(Rng rng, int trials = 200) const;

 private:
  enum class Kind {
    HalfSpace,
    Slab,
    Rectangle,
    Ellipsoid,
    Stripes,
    AnnulusFamily,
    SpiralBand,
    Complement,
    Intersection,
    Translate,
  };
  Kind kind_ = Kind::Intersection;
  int dim_ = 1;
  std::optional<BBox> bbox_;
  bool convex_in_xn_ = false;

  Eigen::VectorXd direction_, lo_, hi_, semi_axes_, shift_;
  double offset_ = 0.0;
  int axis_ = 0;
  double spiral_a_ = 0.0, spiral_b_ = 0.0, spiral_halfwidth_ = 0.0;
  std::shared_ptr<const DomainSpec> inner_;
  std::vector<DomainSpec> members_;

  friend double width_xn(const DomainSpec&);
};

/// Width of a bounded domain along the last axis: sup x_n - inf x_n over the
/// set. Exact for boxes, ellipsoids, slabs and their translates /
/// box-intersections; otherwise measured by a membership scan over the
/// bounding box. Throws for unbounded domains.
double width_xn(const DomainSpec& D);

/// The narrow-region driver d_n(D) |c_inf|^(1/(2s)), to be compared with a
/// caller-chosen threshold.
double narrow_premise_product(const DomainSpec& D, double c_inf, double s);

struct DensityShell {
  int k = 0;
  double rho = 0.0;        ///< estimated complement fraction of the annulus
  double half_width = 0.0; ///< 95% confidence half-width
};

struct DensityProfile {
  std::vector<DensityShell> shells;
  Eigen::VectorXd base_point;
  std::uint64_t seed = 0;
  int samples_per_shell = 0;
};

/// Monte-Carlo complement density over the dyadic annuli
/// B_{2^{k+1}}(q) \ B_{2^k}(q), k in [k_lo, k_hi]. Uniform rejection
/// sampling in Cartesian coordinates; shells use seeds derived as seed + k,
/// so profiles are reproducible bitwise.
DensityProfile density_profile(const DomainSpec& D, const Eigen::VectorXd& q, int k_lo, int k_hi,
                               int samples_per_shell, std::uint64_t seed);

/// Passes when the tail (last half) of the profile stays above the
/// threshold with confidence: min_k (rho_k - half_width_k) >= threshold.
VerificationReport check_density_condition(const DensityProfile& profile, double threshold);

}  // namespace fraclab
