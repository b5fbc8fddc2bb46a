#pragma once

// Test-side oracles, independent of the library's quadrature path. These
// integrate the symmetrized singular integral of an *analytic* 1D function
// directly with adaptive Simpson, an exact inner expansion, and an exact
// constant tail once the function leaves its support.

#include "fraclab/quadrature.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

struct Analytic1d {
  std::function<double(double)> u;
  std::function<double(double)> upp;   // second derivative, used on [x-eps, x+eps]
  double support_radius = 0.0;         // |u| negligible beyond this radius
  std::vector<double> breakpoints;     // kinks of u, as |t| offsets handled per point
};

// (-Delta)^s of an analytic compactly supported function at x, with operator
// constant C. Splits [eps, T] at integrand kinks, uses a two-term Taylor
// expansion on [0, eps] (sampling the raw second difference there would be
// pure cancellation noise), and the exact tail where u vanishes.
inline double brute_frac_lap_1d(const Analytic1d& f, double x, double s, double C,
                                double tol = 1e-10) {
  const double eps = 0.02;
  const double T = f.support_radius + std::abs(x) + 1.0;

  // integrate in log-radius: t = e^tau flattens the boundary layer at eps
  auto integrand = [&](double tau) {
    const double t = std::exp(tau);
    return (f.u(x + t) + f.u(x - t) - 2.0 * f.u(x)) * std::pow(t, -2.0 * s);
  };

  // panel breakpoints where x +- t crosses a kink of u
  std::vector<double> cuts{eps, T};
  for (double b : f.breakpoints) {
    for (double c : {b - x, b + x, -b + x, -b - x}) {
      if (c > eps && c < T) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double mid = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-14) continue;
    mid += fraclab::adaptive_simpson(integrand, std::log(cuts[i]), std::log(cuts[i + 1]), tol);
  }

  // inner expansion: D2(t) = u'' t^2 + u'''' t^4 / 12 + O(t^6)
  const double d4 = 1e-3;
  const double u4 = (f.upp(x + d4) - 2.0 * f.upp(x) + f.upp(x - d4)) / (d4 * d4);
  const double inner = f.upp(x) * std::pow(eps, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) +
                       u4 / 12.0 * std::pow(eps, 4.0 - 2.0 * s) / (4.0 - 2.0 * s);
  const double tail = -2.0 * f.u(x) * std::pow(T, -2.0 * s) / (2.0 * s);
  return -C * (inner + mid + tail);
}

inline Analytic1d gaussian(double amp, double sigma) {
  Analytic1d f;
  f.u = [amp, sigma](double t) { return amp * std::exp(-0.5 * t * t / (sigma * sigma)); };
  f.upp = [amp, sigma](double t) {
    const double z = t / sigma;
    return amp * (z * z - 1.0) / (sigma * sigma) * std::exp(-0.5 * z * z);
  };
  f.support_radius = 14.0 * sigma;
  return f;
}

// the compactly supported profile (1 - t^2)_+^s
inline Analytic1d edge_bump(double s) {
  Analytic1d f;
  f.u = [s](double t) { return t * t < 1.0 ? std::pow(1.0 - t * t, s) : 0.0; };
  f.upp = [s](double t) {
    if (t * t >= 1.0) return 0.0;
    const double w = 1.0 - t * t;
    return -2.0 * s * std::pow(w, s - 1.0) + 4.0 * s * (s - 1.0) * t * t * std::pow(w, s - 2.0);
  };
  f.support_radius = 1.0;
  f.breakpoints = {1.0, -1.0};
  return f;
}

}  // namespace oracle
