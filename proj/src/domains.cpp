#include "fraclab/domains.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fraclab {

namespace {
constexpr double kPi = std::numbers::pi;

double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 60) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

// squared distance from p to the spiral r = a + b theta, theta >= 0
double spiral_dist2(const Eigen::Vector2d& p, double a, double b) {
  const double r = p.norm();
  double phi = std::atan2(p[1], p[0]);
  if (phi < 0.0) phi += 2.0 * kPi;

  auto d2 = [&](double theta) {
    const double rr = a + b * theta;
    const double dx = p[0] - rr * std::cos(theta);
    const double dy = p[1] - rr * std::sin(theta);
    return dx * dx + dy * dy;
  };

  // candidate windings: theta = phi + 2 pi j near the matching radius
  const double j0 = std::floor(((r - a) / b - phi) / (2.0 * kPi));
  double best = std::numeric_limits<double>::infinity();
  for (double j : {j0 - 1.0, j0, j0 + 1.0, j0 + 2.0}) {
    const double th = phi + 2.0 * kPi * j;
    const double lo = std::max(0.0, th - kPi), hi = std::max(0.0, th + kPi);
    if (hi <= lo) continue;
    best = std::min(best, golden_min(d2, lo, hi));
  }
  // the curve endpoint at theta = 0 when p is near the origin
  best = std::min(best, golden_min(d2, 0.0, 2.0 * kPi));
  return best;
}

}  // namespace

DomainSpec DomainSpec::full_space(int dim) { return intersection({}, dim); }

DomainSpec DomainSpec::half_space(const Eigen::VectorXd& direction, double offset) {
  if (direction.norm() <= 0.0) throw std::invalid_argument("half_space: zero direction");
  DomainSpec d;
  d.kind_ = Kind::HalfSpace;
  d.dim_ = static_cast<int>(direction.size());
  d.direction_ = direction / direction.norm();
  d.offset_ = offset;
  d.convex_in_xn_ = true;
  return d;
}

DomainSpec DomainSpec::slab(int dim, int axis, double lo, double hi) {
  if (axis < 0 || axis >= dim) throw std::invalid_argument("slab: bad axis");
  if (!(lo < hi)) throw std::invalid_argument("slab: need lo < hi");
  DomainSpec d;
  d.kind_ = Kind::Slab;
  d.dim_ = dim;
  d.axis_ = axis;
  d.lo_ = Eigen::VectorXd::Constant(1, lo);
  d.hi_ = Eigen::VectorXd::Constant(1, hi);
  d.convex_in_xn_ = true;
  if (dim == 1) {
    BBox b;
    b.lo = Eigen::VectorXd::Constant(1, lo);
    b.hi = Eigen::VectorXd::Constant(1, hi);
    d.bbox_ = b;
  }
  return d;
}

DomainSpec DomainSpec::rectangle(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("rectangle: corner size mismatch");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("rectangle: need lo < hi per axis");
  DomainSpec d;
  d.kind_ = Kind::Rectangle;
  d.dim_ = static_cast<int>(lo.size());
  d.lo_ = lo;
  d.hi_ = hi;
  d.bbox_ = BBox{lo, hi};
  d.convex_in_xn_ = true;
  return d;
}

DomainSpec DomainSpec::ellipsoid(const Eigen::VectorXd& semi_axes) {
  for (int i = 0; i < semi_axes.size(); ++i)
    if (!(semi_axes[i] > 0.0)) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
  DomainSpec d;
  d.kind_ = Kind::Ellipsoid;
  d.dim_ = static_cast<int>(semi_axes.size());
  d.semi_axes_ = semi_axes;
  d.bbox_ = BBox{-semi_axes, semi_axes};
  d.convex_in_xn_ = true;
  return d;
}

DomainSpec DomainSpec::stripes(int dim) {
  DomainSpec d;
  d.kind_ = Kind::Stripes;
  d.dim_ = dim;
  return d;
}

DomainSpec DomainSpec::annulus_family(int dim) {
  DomainSpec d;
  d.kind_ = Kind::AnnulusFamily;
  d.dim_ = dim;
  return d;
}

DomainSpec DomainSpec::spiral_band(double a, double b, double half_width) {
  if (!(b > 0.0) || !(half_width > 0.0))
    throw std::invalid_argument("spiral_band: need b, half_width > 0");
  if (!(half_width < kPi * b))
    throw std::invalid_argument("spiral_band: turns overlap, need half_width < pi b");
  DomainSpec d;
  d.kind_ = Kind::SpiralBand;
  d.dim_ = 2;
  d.spiral_a_ = a;
  d.spiral_b_ = b;
  d.spiral_halfwidth_ = half_width;
  return d;
}

DomainSpec DomainSpec::complement(DomainSpec inner) {
  if (inner.kind_ == Kind::Complement) return *inner.inner_;  // involution
  DomainSpec d;
  d.kind_ = Kind::Complement;
  d.dim_ = inner.dim_;
  d.inner_ = std::make_shared<DomainSpec>(std::move(inner));
  return d;
}

DomainSpec DomainSpec::intersection(std::vector<DomainSpec> members, int dim) {
  DomainSpec d;
  d.kind_ = Kind::Intersection;
  d.dim_ = dim;
  for (const auto& m : members)
    if (m.dim_ != dim) throw std::invalid_argument("intersection: dimension mismatch");
  d.members_ = std::move(members);
  bool convex = !d.members_.empty();
  std::optional<BBox> box;
  for (const auto& m : d.members_) {
    convex = convex && m.convex_in_xn_;
    if (m.bbox_) {
      if (!box) {
        box = m.bbox_;
      } else {
        box->lo = box->lo.cwiseMax(m.bbox_->lo);
        box->hi = box->hi.cwiseMin(m.bbox_->hi);
      }
    }
  }
  d.convex_in_xn_ = convex;
  if (box) {
    for (int i = 0; i < dim; ++i)
      if (!(box->lo[i] < box->hi[i])) throw std::invalid_argument("intersection: empty interior");
    d.bbox_ = box;
  }
  return d;
}

DomainSpec DomainSpec::translate(DomainSpec inner, const Eigen::VectorXd& shift) {
  if (shift.size() != inner.dim_) throw std::invalid_argument("translate: dimension mismatch");
  DomainSpec d;
  d.kind_ = Kind::Translate;
  d.dim_ = inner.dim_;
  d.shift_ = shift;
  d.convex_in_xn_ = inner.convex_in_xn_;
  if (inner.bbox_) d.bbox_ = BBox{inner.bbox_->lo + shift, inner.bbox_->hi + shift};
  d.inner_ = std::make_shared<DomainSpec>(std::move(inner));
  return d;
}

bool DomainSpec::contains(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("DomainSpec::contains: dimension mismatch");
  switch (kind_) {
    case Kind::HalfSpace:
      return direction_.dot(x) > offset_;
    case Kind::Slab:
      return x[axis_] > lo_[0] && x[axis_] < hi_[0];
    case Kind::Rectangle:
      for (int i = 0; i < dim_; ++i)
        if (x[i] <= lo_[i] || x[i] >= hi_[i]) return false;
      return true;
    case Kind::Ellipsoid: {
      double acc = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double z = x[i] / semi_axes_[i];
        acc += z * z;
      }
      return acc < 1.0;
    }
    case Kind::Stripes: {
      const double r = x[dim_ - 1] - 2.0 * std::floor(x[dim_ - 1] / 2.0);
      return r > 0.0 && r < 1.0;
    }
    case Kind::AnnulusFamily: {
      const double nr = x.norm();
      const double r = nr - 2.0 * std::floor(nr / 2.0);
      return r > 0.0 && r < 1.0;
    }
    case Kind::SpiralBand: {
      Eigen::Vector2d p(x[0], x[1]);
      return spiral_dist2(p, spiral_a_, spiral_b_) <
             spiral_halfwidth_ * spiral_halfwidth_;
    }
    case Kind::Complement:
      return !inner_->contains(x);
    case Kind::Intersection:
      for (const auto& m : members_)
        if (!m.contains(x)) return false;
      return true;
    case Kind::Translate:
      return inner_->contains(x - shift_);
  }
  return false;
}

bool DomainSpec::spot_check_convex_in_xn(Rng rng, int trials) const {
  if (!convex_in_xn_) return true;  // nothing declared
  if (!bbox_) return true;          // unbounded variants are not sampled
  const BBox& b = *bbox_;
  int checked = 0;
  for (int t = 0; t < trials * 10 && checked < trials; ++t) {
    Eigen::VectorXd a(dim_), c(dim_);
    for (int i = 0; i < dim_; ++i) a[i] = rng.uniform(b.lo[i], b.hi[i]);
    c = a;
    c[dim_ - 1] = rng.uniform(b.lo[dim_ - 1], b.hi[dim_ - 1]);
    if (!contains(a) || !contains(c)) continue;
    ++checked;
    Eigen::VectorXd mid = 0.5 * (a + c);
    if (!contains(mid)) return false;
  }
  return true;
}

double width_xn(const DomainSpec& D) {
  if (!D.bounded()) throw std::invalid_argument("width_xn: domain is unbounded");
  const int n = D.dim();
  switch (D.kind_) {
    case DomainSpec::Kind::Rectangle:
      return D.hi_[n - 1] - D.lo_[n - 1];
    case DomainSpec::Kind::Ellipsoid:
      return 2.0 * D.semi_axes_[n - 1];
    case DomainSpec::Kind::Slab:
      return D.axis_ == n - 1 ? D.hi_[0] - D.lo_[0]
                              : throw std::invalid_argument("width_xn: unbounded slab");
    case DomainSpec::Kind::Translate:
      return width_xn(*D.inner_);
    case DomainSpec::Kind::Intersection: {
      // exact when every bounded member is a box or a translate of one
      bool all_boxes = true;
      for (const auto& m : D.members_) {
        const DomainSpec* cur = &m;
        while (cur->kind_ == DomainSpec::Kind::Translate) cur = cur->inner_.get();
        if (cur->kind_ != DomainSpec::Kind::Rectangle &&
            cur->kind_ != DomainSpec::Kind::Slab)
          all_boxes = false;
      }
      if (all_boxes) return D.bbox_->hi[n - 1] - D.bbox_->lo[n - 1];
      break;
    }
    default:
      break;
  }
  // membership scan over the bounding box
  const BBox& b = *D.bbox_;
  const int cols = 64, rows = 4096;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd x(n);
  for (int c = 0; c < cols; ++c) {
    for (int i = 0; i < n - 1; ++i)
      x[i] = b.lo[i] + (b.hi[i] - b.lo[i]) * halton(c, i == 0 ? 2 : 3);
    for (int r = 0; r <= rows; ++r) {
      x[n - 1] = b.lo[n - 1] + (b.hi[n - 1] - b.lo[n - 1]) * r / rows;
      if (D.contains(x)) {
        lo = std::min(lo, x[n - 1]);
        hi = std::max(hi, x[n - 1]);
      }
    }
  }
  if (!(hi >= lo)) throw std::invalid_argument("width_xn: no interior points found in scan");
  return hi - lo;
}

double narrow_premise_product(const DomainSpec& D, double c_inf, double s) {
  return width_xn(D) * std::pow(std::abs(c_inf), 1.0 / (2.0 * s));
}

DensityProfile density_profile(const DomainSpec& D, const Eigen::VectorXd& q, int k_lo, int k_hi,
                               int samples_per_shell, std::uint64_t seed) {
  if (!D.contains(q)) throw std::invalid_argument("density_profile: base point not in the domain");
  if (samples_per_shell < 1000)
    throw std::invalid_argument("density_profile: need at least 1000 samples per shell");
  if (k_lo > k_hi) throw std::invalid_argument("density_profile: empty shell range");

  const int n = D.dim();
  DensityProfile prof;
  prof.base_point = q;
  prof.seed = seed;
  prof.samples_per_shell = samples_per_shell;

  for (int k = k_lo; k <= k_hi; ++k) {
    Rng rng = Rng(seed).fork(static_cast<std::uint64_t>(k) + 1000);
    const double r_in = std::pow(2.0, k), r_out = 2.0 * r_in;
    int hits = 0;
    Eigen::VectorXd y(n);
    for (int i = 0; i < samples_per_shell; ++i) {
      // rejection sampling from the bounding cube keeps the law exactly
      // uniform on the annulus
      double r;
      do {
        for (int d = 0; d < n; ++d) y[d] = rng.uniform(-r_out, r_out);
        r = y.norm();
      } while (r <= r_in || r > r_out);
      if (!D.contains(q + y)) ++hits;
    }
    DensityShell shell;
    shell.k = k;
    shell.rho = static_cast<double>(hits) / samples_per_shell;
    shell.half_width =
        1.96 * std::sqrt(std::max(shell.rho * (1.0 - shell.rho), 1e-12) / samples_per_shell);
    prof.shells.push_back(shell);
  }
  return prof;
}

VerificationReport check_density_condition(const DensityProfile& profile, double threshold) {
  VerificationReport rep;
  rep.check = "density_condition";
  if (profile.shells.empty()) throw std::invalid_argument("check_density_condition: empty profile");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("check_density_condition: threshold must be in (0,1)");

  const size_t start = profile.shells.size() / 2;
  double tail_min = std::numeric_limits<double>::infinity();
  int witness_k = profile.shells[start].k;
  for (size_t i = start; i < profile.shells.size(); ++i) {
    const double lower = profile.shells[i].rho - profile.shells[i].half_width;
    if (lower < tail_min) {
      tail_min = lower;
      witness_k = profile.shells[i].k;
    }
  }
  rep.metric("tail_min_lower_bound", tail_min);
  rep.metric("threshold", threshold);
  rep.metric("witness_shell", witness_k);
  rep.metric("shells", static_cast<double>(profile.shells.size()));
  rep.status = tail_min >= threshold ? CheckStatus::Pass : CheckStatus::Fail;
  rep.notes.push_back("liminf surrogate: minimum of (rho_k - ci_k) over the last half of shells");
  return rep;
}

}  // namespace fraclab
