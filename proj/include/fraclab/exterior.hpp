#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>

namespace fraclab {

/// Analytic closure that makes a grid-sampled function globally defined.
///
/// The kind drives how far-field integrals are closed: Zero and Constant
/// have exact tails, a VerticalProfile depends on the last coordinate only
/// and carries its limits at x_n -> -inf/+inf, and a ClosedForm is a general
/// callable with a declared growth bound |u(y)| <= C (1+|y|)^growth.
class ExteriorModel {
 public:
  enum class Kind { Zero, Constant, VerticalProfile, ClosedForm };

  /// Default-constructed model is the zero closure.
  ExteriorModel() = default;

  static ExteriorModel zero();
  static ExteriorModel constant(double value);

  /// profile is a function of the vertical coordinate x_n alone; its limits
  /// are approached monotonically outside the slab |x_n| <= slab_halfwidth.
  static ExteriorModel vertical_profile(std::function<double(double)> profile, double limit_lo,
                                        double limit_hi, double slab_halfwidth);

  /// General closure. growth is the declared exponent alpha with
  /// |u(y)| <= bound_const (1+|y|)^alpha; oscillation_scale > 0 declares the
  /// shortest length scale on which the closure varies, so tail quadratures
  /// can resolve it (0 = no oscillation). A finite mean_at_infinity lets far
  /// tails close against that value instead of the crude growth bound.
  static ExteriorModel closed_form(std::function<double(const Eigen::VectorXd&)> fn, double growth,
                                   double bound_const = 1.0, double oscillation_scale = 0.0);
  ExteriorModel with_mean_at_infinity(double mean) const;

  double operator()(const Eigen::VectorXd& x) const;

  Kind kind() const { return kind_; }
  double growth() const { return growth_; }
  double bound_const() const { return bound_const_; }
  double oscillation_scale() const { return oscillation_scale_; }

  /// Zero, Constant and VerticalProfile have declared limits along x_n; a
  /// ClosedForm has them only when a mean at infinity was declared.
  bool has_limits() const { return kind_ != Kind::ClosedForm || has_mean_; }
  double limit_lo() const { return limit_lo_; }
  double limit_hi() const { return limit_hi_; }
  /// Limits are approached outside |x_n| <= slab(); 0 for Zero/Constant.
  double slab() const { return slab_; }

  /// Evaluate the vertical profile directly (VerticalProfile only).
  double profile(double xn) const;

  /// Model of x -> u(x', x_n + tau).
  ExteriorModel shifted_vertical(double tau) const;

  /// Model of a - b, preserving the most structured common kind.
  static ExteriorModel difference(const ExteriorModel& a, const ExteriorModel& b);

  /// Model of max(u, 0), kind-preserving.
  ExteriorModel positive_part() const;

 private:
  Kind kind_ = Kind::Zero;
  double value_ = 0.0;  // Constant
  std::function<double(double)> profile_;
  std::function<double(const Eigen::VectorXd&)> fn_;
  double growth_ = 0.0;
  double bound_const_ = 0.0;
  double oscillation_scale_ = 0.0;
  double limit_lo_ = 0.0, limit_hi_ = 0.0;
  double slab_ = 0.0;
  bool has_mean_ = false;
};

}  // namespace fraclab
