#include <doctest.h>

#include "fraclab/fractional_laplacian.hpp"
#include "fraclab/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace fraclab;
using Eigen::VectorXd;
using Eigen::VectorXi;

namespace {

Grid grid1d(double lo, double hi, double h) {
  const int m = static_cast<int>(std::lround((hi - lo) / h)) + 1;
  VectorXd origin(1), spacing(1);
  VectorXi shape(1);
  origin << lo;
  spacing << h;
  shape << m;
  return Grid(origin, spacing, shape);
}

Grid grid2d(double lo, double hi, double h) {
  const int m = static_cast<int>(std::lround((hi - lo) / h)) + 1;
  VectorXd origin(2), spacing(2);
  VectorXi shape(2);
  origin << lo, lo;
  spacing << h, h;
  shape << m, m;
  return Grid(origin, spacing, shape);
}

VectorXd vec1(double x) {
  VectorXd v(1);
  v << x;
  return v;
}

ExteriorModel cos_closure() {
  return ExteriorModel::closed_form([](const VectorXd& x) { return std::cos(x[0]); }, 0.0, 1.0,
                                    std::numbers::pi)
      .with_mean_at_infinity(0.0);
}

GridFunction cos_field(double h, double half_width = 20.0) {
  return sample_function(grid1d(-half_width, half_width, h), cos_closure(), "smooth");
}

ExteriorModel gaussian_closure(double amp, double sigma) {
  return ExteriorModel::closed_form(
      [amp, sigma](const VectorXd& x) {
        return amp * std::exp(-0.5 * x.squaredNorm() / (sigma * sigma));
      },
      0.0, std::abs(amp));
}

}  // namespace

TEST_SUITE_BEGIN("operator");

TEST_CASE("constants are annihilated") {
  QuadratureSpec q;
  for (int n : {1, 2}) {
    auto p = make_params(n, 0.6);
    Grid g = n == 1 ? grid1d(-2.0, 2.0, 0.1) : grid2d(-2.0, 2.0, 0.25);
    GridFunction u = sample_function(g, ExteriorModel::constant(3.25));
    CHECK(std::abs(frac_laplacian_at(p, u, VectorXd::Zero(n), q)) < 1e-11);
    VectorXd off = VectorXd::Constant(n, 0.3);
    CHECK(std::abs(frac_laplacian_at(p, u, off, q)) < 1e-11);
  }
}

TEST_CASE("1d cosine matches its symbol on the lattice path") {
  QuadratureSpec q;
  for (double s : {0.25, 0.5, 0.75}) {
    auto p = make_params(1, s);
    GridFunction u = cos_field(0.01);
    for (double x : {0.0, 0.3, -0.6, 1.2}) {
      // multiplier of cos at frequency 1 is exactly 1
      const double got = frac_laplacian_at(p, u, vec1(x), q);
      CHECK(got == doctest::Approx(std::cos(x)).epsilon(2e-4));
    }
  }
}

TEST_CASE("1d cosine off-lattice (general path) stays within tolerance") {
  QuadratureSpec q;
  for (double s : {0.25, 0.5, 0.75}) {
    auto p = make_params(1, s);
    GridFunction u = cos_field(0.01);
    for (double x : {0.004999, 0.356789, -0.612345}) {
      const double got = frac_laplacian_at(p, u, vec1(x), q);
      CHECK(got == doctest::Approx(std::cos(x)).epsilon(5e-3));
    }
  }
}

TEST_CASE("gaussian agrees with the brute-force oracle") {
  QuadratureSpec q;
  auto f = oracle::gaussian(1.0, 1.0);
  Grid g = grid1d(-16.0, 16.0, 0.01);
  for (double s : {0.3, 0.5, 0.8}) {
    auto p = make_params(1, s);
    GridFunction u = sample_function(g, gaussian_closure(1.0, 1.0));
    for (double x : {0.0, 0.5, -1.25}) {
      const double ref = oracle::brute_frac_lap_1d(f, x, s, p.c_ns);
      const double got = frac_laplacian_at(p, u, vec1(x), q);
      CHECK(got == doctest::Approx(ref).epsilon(2e-4));
    }
  }
}

TEST_CASE("edge bump has constant operator value inside the ball") {
  // (-Delta)^s (1-x^2)_+^s is constant in (-1,1); the level equals
  // 4^s Gamma(1+s) Gamma(1/2+s) / Gamma(1/2), cross-checked by brute force.
  QuadratureSpec q;
  for (double s : {0.25, 0.5, 0.75}) {
    auto p = make_params(1, s);
    const double expected =
        std::pow(4.0, s) * std::tgamma(1.0 + s) * std::tgamma(0.5 + s) / std::tgamma(0.5);
    const double ref = oracle::brute_frac_lap_1d(oracle::edge_bump(s), 0.3, s, p.c_ns, 1e-10);
    CHECK(ref == doctest::Approx(expected).epsilon(1e-6));

    Grid g = grid1d(-2.0, 2.0, 0.002);
    GridFunction u = sample_function(
        g,
        [s](const VectorXd& x) { return x[0] * x[0] < 1.0 ? std::pow(1.0 - x[0] * x[0], s) : 0.0; },
        ExteriorModel::zero());
    std::vector<double> vals;
    for (double x : {0.0, 0.3, -0.3, 0.6, -0.6})
      vals.push_back(frac_laplacian_at(p, u, vec1(x), q));
    double mn = vals[0], mx = vals[0];
    for (double v : vals) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    CHECK((mx - mn) / std::abs(expected) < 1e-3);               // constancy
    CHECK(vals[0] == doctest::Approx(expected).epsilon(2e-3));  // level
  }
}

TEST_CASE("linearity") {
  auto p = make_params(1, 0.5);
  QuadratureSpec q;
  Grid g = grid1d(-8.0, 8.0, 0.05);
  GridFunction u = sample_function(g, gaussian_closure(1.0, 1.0));
  GridFunction v = sample_function(g, gaussian_closure(-0.5, 2.0));
  const double a = 2.5, b = -1.75;
  GridFunction w(g, a * u.values() + b * v.values(),
                 ExteriorModel::closed_form(
                     [a, b, eu = u.exterior(), ev = v.exterior()](const VectorXd& x) {
                       return a * eu(x) + b * ev(x);
                     },
                     0.0, 4.0));
  const VectorXd x = vec1(0.35);
  const double lhs = frac_laplacian_at(p, w, x, q);
  const double rhs = a * frac_laplacian_at(p, u, x, q) + b * frac_laplacian_at(p, v, x, q);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
}

TEST_CASE("translation equivariance on the lattice") {
  auto p = make_params(1, 0.4);
  QuadratureSpec q;
  Grid g = grid1d(-10.0, 10.0, 0.05);
  GridFunction u = sample_function(g, gaussian_closure(1.0, 1.2));
  const double tau = 0.25;  // 5 lattice steps
  GridFunction ut = shift_vertical(u, tau);
  for (double x : {0.0, 0.5, -1.5}) {
    const double lhs = frac_laplacian_at(p, ut, vec1(x), q);
    const double rhs = frac_laplacian_at(p, u, vec1(x + tau), q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("scaling law") {
  // u_lam(x) = u(lam x) => op(u_lam)(x) = lam^(2s) op(u)(lam x), lam = 2
  auto p = make_params(1, 0.5);
  QuadratureSpec q;
  GridFunction u = sample_function(grid1d(-16.0, 16.0, 0.02), gaussian_closure(1.0, 1.0));
  GridFunction ul = sample_function(grid1d(-8.0, 8.0, 0.01), gaussian_closure(1.0, 0.5));
  for (double x : {0.0, 0.4, -0.9}) {
    const double lhs = frac_laplacian_at(p, ul, vec1(x), q);
    const double rhs = 2.0 * frac_laplacian_at(p, u, vec1(2.0 * x), q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
  }
}

TEST_CASE("positive at a strict global maximum") {
  QuadratureSpec q;
  Rng rng(2024);
  auto p1 = make_params(1, 0.35);
  Grid g = grid1d(-6.0, 6.0, 0.05);
  for (int trial = 0; trial < 10; ++trial) {
    const double amp = 0.5 + rng.uniform01();
    const double sig = 0.4 + rng.uniform01();
    const double c = rng.uniform(-1.0, 1.0);
    GridFunction u = sample_function(
        g,
        [&](const VectorXd& x) { return amp * std::exp(-0.5 * std::pow((x[0] - c) / sig, 2)); },
        gaussian_closure(amp, sig));
    Eigen::Index arg;
    u.values().maxCoeff(&arg);
    CHECK(frac_laplacian_at(p1, u, g.node(arg), q) > 0.0);
  }

  auto p2 = make_params(2, 0.6);
  Grid g2 = grid2d(-4.0, 4.0, 0.1);
  for (int trial = 0; trial < 5; ++trial) {
    const double sig = 0.5 + rng.uniform01();
    GridFunction u = sample_function(
        g2, [&](const VectorXd& x) { return std::exp(-0.5 * x.squaredNorm() / (sig * sig)); },
        ExteriorModel::zero());
    Eigen::Index arg;
    u.values().maxCoeff(&arg);
    CHECK(frac_laplacian_at(p2, u, g2.node(arg), q) > 0.0);
  }
}

TEST_CASE("refinement improves the cosine error") {
  auto p = make_params(1, 0.5);
  QuadratureSpec q;
  auto worst = [&](double h) {
    GridFunction u = cos_field(h);
    double e = 0.0;
    for (double x : {0.0, 0.3, -0.6})
      e = std::max(e, std::abs(frac_laplacian_at(p, u, vec1(x), q) - std::cos(x)));
    return e;
  };
  const double e1 = worst(0.01);
  const double e2 = worst(0.005);
  CHECK(e1 < 1e-3);
  CHECK(e2 * 2.0 <= e1);
}

TEST_CASE("batched field evaluation matches pointwise bitwise") {
  auto p = make_params(1, 0.5);
  QuadratureSpec q;
  GridFunction u = cos_field(0.05);
  std::vector<VectorXd> pts;
  CHECK(frac_laplacian_field(p, u, pts, q).empty());
  for (double x : {-1.0, 0.0, 0.7}) pts.push_back(vec1(x));
  auto batch = frac_laplacian_field(p, u, pts, q);
  auto batch4 = frac_laplacian_field(p, u, pts, q, 4);
  for (size_t i = 0; i < pts.size(); ++i) {
    const double single = frac_laplacian_at(p, u, pts[i], q);
    CHECK(batch[i] == single);   // bitwise
    CHECK(batch4[i] == single);  // thread count unobservable
  }
}

TEST_CASE("preconditions are enforced") {
  auto p = make_params(1, 0.5);
  QuadratureSpec q;
  GridFunction u = cos_field(0.05, 2.0);
  CHECK_THROWS(frac_laplacian_at(p, u, vec1(1.999), q));  // hull margin
  CHECK_THROWS(frac_laplacian_at(p, u, vec1(5.0), q));    // outside hull

  // growth too large for the gate at small s
  auto ps = make_params(1, 0.2);
  GridFunction v = sample_function(
      grid1d(-2.0, 2.0, 0.1),
      ExteriorModel::closed_form(
          [](const VectorXd& x) { return std::sqrt(1.0 + std::abs(x[0])); }, 0.5, 1.0));
  CHECK_THROWS(frac_laplacian_at(ps, v, vec1(0.0), q));
}

TEST_CASE("assembled operator reproduces pointwise evaluation") {
  auto p = make_params(1, 0.5);
  QuadratureSpec q;
  Grid g = grid1d(-1.6, 1.6, 0.05);
  auto omega = [](const VectorXd& x) { return std::abs(x[0]) < 1.25; };
  ExteriorModel phi = ExteriorModel::constant(0.75);
  auto op = assemble_linear_operator(p, g, omega, q, phi);

  Rng rng(7);
  VectorXd vals(g.size());
  for (Eigen::Index f = 0; f < g.size(); ++f)
    vals[f] = op.row_of(f) >= 0 ? rng.uniform(-1.0, 1.0) : phi(g.node(f));
  GridFunction u(g, vals, phi);

  VectorXd U(op.unknowns().size());
  for (size_t r = 0; r < op.unknowns().size(); ++r) U[r] = vals[op.unknowns()[r]];
  VectorXd res = op.matrix() * U + op.load(phi);
  for (size_t r = 0; r < op.unknowns().size(); ++r) {
    const double direct = frac_laplacian_at(p, u, g.node(op.unknowns()[r]), q);
    CHECK(res[r] == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("assembled operator annihilates constants and has the right signs") {
  for (int n : {1, 2}) {
    auto p = make_params(n, 0.45);
    QuadratureSpec q;
    Grid g = n == 1 ? grid1d(-1.6, 1.6, 0.05) : grid2d(-1.2, 1.2, 0.15);
    auto omega = [](const VectorXd& x) { return x.cwiseAbs().maxCoeff() < 1.0; };
    ExteriorModel phi = ExteriorModel::constant(2.0);
    auto op = assemble_linear_operator(p, g, omega, q, phi);

    const Eigen::Index m = static_cast<Eigen::Index>(op.unknowns().size());
    VectorXd ones = VectorXd::Constant(m, 2.0);
    VectorXd res = op.matrix() * ones + op.load(phi);
    CHECK(res.cwiseAbs().maxCoeff() < 1e-9);

    for (Eigen::Index i = 0; i < m; ++i) {
      CHECK(op.matrix()(i, i) > 0.0);
      for (Eigen::Index j = 0; j < m; ++j) {
        if (i != j) CHECK(op.matrix()(i, j) <= 1e-14);
      }
    }
  }
}

TEST_CASE("assembly rejects empty interiors") {
  auto p = make_params(1, 0.5);
  QuadratureSpec q;
  Grid g = grid1d(-1.0, 1.0, 0.25);
  CHECK_THROWS(assemble_linear_operator(
      p, g, [](const VectorXd&) { return false; }, q, ExteriorModel::zero()));
}

TEST_SUITE_END();
