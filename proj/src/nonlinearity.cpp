#include "fraclab/nonlinearity.hpp"

#include "fraclab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

Nonlinearity Nonlinearity::cubic_bistable(double flat_delta) {
  const double max_delta = 1.0 - 1.0 / std::sqrt(3.0);
  if (!(flat_delta > 0.0) || flat_delta > max_delta + 1e-12)
    throw std::invalid_argument(
        "cubic_bistable: flat_delta must lie in (0, 1 - 1/sqrt(3)]");
  Nonlinearity f;
  f.kind_ = Kind::CubicBistable;
  f.flat_delta_ = flat_delta;
  // |f'| = |1 - 3u^2| on |u| <= 1.2
  f.lipschitz_ = 3.0 * 1.2 * 1.2 - 1.0;
  return f;
}

Nonlinearity Nonlinearity::linear(double slope, double intercept) {
  Nonlinearity f;
  f.kind_ = Kind::Linear;
  f.slope_ = slope;
  f.intercept_ = intercept;
  f.lipschitz_ = std::abs(slope);
  return f;
}

Nonlinearity Nonlinearity::tabulated(std::function<double(double)> fn, double lipschitz_const,
                                     double range_lo, double range_hi,
                                     std::optional<double> flat_delta) {
  if (!fn) throw std::invalid_argument("tabulated: empty callable");
  if (!(lipschitz_const >= 0.0)) throw std::invalid_argument("tabulated: negative Lipschitz const");
  Rng rng(0x5eedf00d);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(range_lo, range_hi);
    const double b = rng.uniform(range_lo, range_hi);
    if (std::abs(a - b) < 1e-12) continue;
    if (std::abs(fn(a) - fn(b)) > (lipschitz_const + 1e-9) * std::abs(a - b))
      throw std::invalid_argument("tabulated: declared Lipschitz constant violated");
  }
  Nonlinearity f;
  f.kind_ = Kind::Tabulated;
  f.f_ = std::move(fn);
  f.lipschitz_ = lipschitz_const;
  f.flat_delta_ = flat_delta;
  return f;
}

double Nonlinearity::operator()(double u) const {
  switch (kind_) {
    case Kind::CubicBistable:
      return u - u * u * u;
    case Kind::Linear:
      return slope_ * u + intercept_;
    case Kind::Tabulated:
      return f_(u);
  }
  return 0.0;
}

double Nonlinearity::derivative(double u) const {
  switch (kind_) {
    case Kind::CubicBistable:
      return 1.0 - 3.0 * u * u;
    case Kind::Linear:
      return slope_;
    case Kind::Tabulated: {
      const double d = 1e-6;
      return (f_(u + d) - f_(u - d)) / (2.0 * d);
    }
  }
  return 0.0;
}

}  // namespace fraclab
