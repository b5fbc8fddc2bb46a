#include "fraclab/exterior.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

ExteriorModel ExteriorModel::zero() {
  ExteriorModel m;
  m.kind_ = Kind::Zero;
  return m;
}

ExteriorModel ExteriorModel::constant(double value) {
  ExteriorModel m;
  m.kind_ = Kind::Constant;
  m.value_ = value;
  m.limit_lo_ = m.limit_hi_ = value;
  m.bound_const_ = std::abs(value);
  return m;
}

ExteriorModel ExteriorModel::vertical_profile(std::function<double(double)> profile,
                                              double limit_lo, double limit_hi,
                                              double slab_halfwidth) {
  if (!profile) throw std::invalid_argument("vertical_profile: empty profile");
  if (slab_halfwidth < 0.0) throw std::invalid_argument("vertical_profile: negative slab");
  ExteriorModel m;
  m.kind_ = Kind::VerticalProfile;
  m.profile_ = std::move(profile);
  m.limit_lo_ = limit_lo;
  m.limit_hi_ = limit_hi;
  m.slab_ = slab_halfwidth;
  // sup of the profile over the slab can exceed the limits; sample it
  double bound = std::max(std::abs(limit_lo), std::abs(limit_hi));
  const double span = 2.0 * (slab_halfwidth + 1.0);
  for (int i = 0; i <= 64; ++i)
    bound = std::max(bound, std::abs(m.profile_(-span + 2.0 * span * i / 64.0)));
  m.bound_const_ = bound;
  return m;
}

ExteriorModel ExteriorModel::closed_form(std::function<double(const Eigen::VectorXd&)> fn,
                                         double growth, double bound_const,
                                         double oscillation_scale) {
  if (!fn) throw std::invalid_argument("closed_form: empty callable");
  ExteriorModel m;
  m.kind_ = Kind::ClosedForm;
  m.fn_ = std::move(fn);
  m.growth_ = growth;
  m.bound_const_ = bound_const;
  m.oscillation_scale_ = oscillation_scale;
  return m;
}

ExteriorModel ExteriorModel::with_mean_at_infinity(double mean) const {
  if (kind_ != Kind::ClosedForm)
    throw std::logic_error("with_mean_at_infinity: only meaningful for closed forms");
  ExteriorModel m = *this;
  m.has_mean_ = true;
  m.limit_lo_ = m.limit_hi_ = mean;
  return m;
}

double ExteriorModel::operator()(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return value_;
    case Kind::VerticalProfile:
      return profile_(x[x.size() - 1]);
    case Kind::ClosedForm:
      return fn_(x);
  }
  return 0.0;
}

double ExteriorModel::profile(double xn) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return value_;
    case Kind::VerticalProfile:
      return profile_(xn);
    case Kind::ClosedForm:
      throw std::logic_error("ExteriorModel::profile: closed forms are not vertical profiles");
  }
  return 0.0;
}

ExteriorModel ExteriorModel::shifted_vertical(double tau) const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::Constant:
      return *this;
    case Kind::VerticalProfile: {
      auto base = profile_;
      return vertical_profile([base, tau](double xn) { return base(xn + tau); }, limit_lo_,
                              limit_hi_, slab_ + std::abs(tau));
    }
    case Kind::ClosedForm: {
      auto base = fn_;
      auto shifted_fn = [base, tau](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = x;
        y[y.size() - 1] += tau;
        return base(y);
      };
      ExteriorModel m =
          closed_form(shifted_fn, growth_,
                      bound_const_ * std::pow(1.0 + std::abs(tau), std::max(growth_, 0.0)),
                      oscillation_scale_);
      if (has_mean_) m = m.with_mean_at_infinity(limit_lo_);
      return m;
    }
  }
  return *this;
}

ExteriorModel ExteriorModel::difference(const ExteriorModel& a, const ExteriorModel& b) {
  if (b.kind_ == Kind::Zero) return a;
  if (a.kind_ == Kind::Constant && b.kind_ == Kind::Constant)
    return constant(a.value_ - b.value_);
  const bool both_vertical = a.kind_ != Kind::ClosedForm && b.kind_ != Kind::ClosedForm;
  if (both_vertical) {
    const ExteriorModel ac = a, bc = b;
    return vertical_profile([ac, bc](double xn) { return ac.profile(xn) - bc.profile(xn); },
                            a.limit_lo_ - b.limit_lo_, a.limit_hi_ - b.limit_hi_,
                            std::max(a.slab_, b.slab_));
  }
  const ExteriorModel ac = a, bc = b;
  ExteriorModel m = closed_form([ac, bc](const Eigen::VectorXd& x) { return ac(x) - bc(x); },
                                std::max(a.growth_, b.growth_), a.bound_const_ + b.bound_const_,
                                std::max(a.oscillation_scale_, b.oscillation_scale_));
  const bool a_flat = a.has_limits() && a.limit_lo_ == a.limit_hi_;
  const bool b_flat = b.has_limits() && b.limit_lo_ == b.limit_hi_;
  if (a_flat && b_flat) m = m.with_mean_at_infinity(a.limit_lo_ - b.limit_lo_);
  return m;
}

ExteriorModel ExteriorModel::positive_part() const {
  switch (kind_) {
    case Kind::Zero:
      return *this;
    case Kind::Constant:
      return constant(std::max(value_, 0.0));
    case Kind::VerticalProfile: {
      auto base = profile_;
      return vertical_profile([base](double xn) { return std::max(base(xn), 0.0); },
                              std::max(limit_lo_, 0.0), std::max(limit_hi_, 0.0), slab_);
    }
    case Kind::ClosedForm: {
      auto base = fn_;
      return closed_form([base](const Eigen::VectorXd& x) { return std::max(base(x), 0.0); },
                         growth_, bound_const_, oscillation_scale_);
    }
  }
  return *this;
}

}  // namespace fraclab
