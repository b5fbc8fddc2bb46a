#include <doctest.h>

#include "fraclab/grid_function.hpp"
#include "fraclab/rng.hpp"

#include <cmath>

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

ExteriorModel tanh_profile(double scale = 1.0) {
  return ExteriorModel::vertical_profile([scale](double t) { return std::tanh(t / scale); },
                                         -1.0, 1.0, 6.0 * scale);
}

}  // namespace

TEST_SUITE_BEGIN("field");

TEST_CASE("grid index maps are exact inverses") {
  Grid g = grid2d(-1.0, 1.0, 0.25);
  for (Eigen::Index f = 0; f < g.size(); ++f) {
    CHECK(g.flatten(g.unflatten(f)) == f);
  }
  CHECK(g.size() == 81);
  CHECK(g.node(g.unflatten(0))(0) == doctest::Approx(-1.0));
}

TEST_CASE("constant function is constant everywhere") {
  Grid g = grid1d(-2.0, 2.0, 0.5);
  GridFunction u = sample_function(g, ExteriorModel::constant(5.0));
  for (double x : {-10.0, -2.0, -0.3, 0.1249, 2.0, 77.0}) {
    CHECK(u.evaluate(vec1(x)) == doctest::Approx(5.0).epsilon(1e-15));
  }
}

TEST_CASE("interpolation reproduces nodes exactly and is linear between") {
  Grid g = grid1d(0.0, 1.0, 1.0);  // two nodes
  VectorXd vals(2);
  vals << 0.0, 1.0;
  GridFunction u(g, vals, ExteriorModel::zero());
  CHECK(u.evaluate(vec1(0.0)) == 0.0);
  CHECK(u.evaluate(vec1(1.0)) == 1.0);
  CHECK(u.evaluate(vec1(0.5)) == doctest::Approx(0.5));
  CHECK(u.evaluate(vec1(0.25)) == doctest::Approx(0.25));

  Grid g2 = grid2d(-1.0, 1.0, 0.1);
  GridFunction v = sample_function(
      g2, [](const VectorXd& x) { return 3.0 * x[0] - 2.0 * x[1] + 0.25; },
      ExteriorModel::closed_form(
          [](const VectorXd& x) { return 3.0 * x[0] - 2.0 * x[1] + 0.25; }, 1.0, 6.0));
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    VectorXd x(2);
    x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    // bilinear interpolation is exact on affine functions
    CHECK(v.evaluate(x) == doctest::Approx(3.0 * x[0] - 2.0 * x[1] + 0.25).epsilon(1e-12));
  }
  // lattice points are exact stored values
  for (Eigen::Index f = 0; f < g2.size(); f += 7) {
    CHECK(v.evaluate(g2.node(f)) == v.value_at(f));
  }
}

TEST_CASE("shift_vertical composes and is exact") {
  Grid g = grid1d(-4.0, 4.0, 0.25);
  GridFunction u = sample_function(g, tanh_profile());
  GridFunction u0 = shift_vertical(u, 0.0);
  GridFunction uab = shift_vertical(shift_vertical(u, 0.75), 0.5);
  GridFunction uc = shift_vertical(u, 1.25);
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const VectorXd x = vec1(rng.uniform(-8.0, 8.0));
    CHECK(u0.evaluate(x) == doctest::Approx(u.evaluate(x)).epsilon(1e-15));
    CHECK(uab.evaluate(x) == doctest::Approx(uc.evaluate(x)).epsilon(1e-13));
    // definition: u^tau(x) = u(x + tau e_n)
    CHECK(uc.evaluate(x) == doctest::Approx(u.evaluate(vec1(x[0] + 1.25))).epsilon(1e-13));
  }
}

TEST_CASE("shifted vertical profile moves toward its upper limit") {
  Grid g = grid1d(-4.0, 4.0, 0.25);
  GridFunction u = sample_function(g, tanh_profile());
  GridFunction up = shift_vertical(u, 10.0);
  // at the former upper hull boundary the shifted function is nearly +1
  CHECK(up.evaluate(vec1(4.0)) > u.evaluate(vec1(4.0)));
  CHECK(up.evaluate(vec1(4.0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("difference algebra") {
  Grid g = grid1d(-4.0, 4.0, 0.25);
  GridFunction u = sample_function(g, tanh_profile());

  GridFunction zero = difference(u, u);
  for (double x : {-5.0, -1.0, 0.125, 3.9, 9.0}) CHECK(zero.evaluate(vec1(x)) == 0.0);

  // w^tau = u^tau - u for a strictly increasing profile is positive, and
  // tends to 0 as |x_n| -> inf because the shifted limits agree
  const double tau = 0.5;
  GridFunction w = difference(shift_vertical(u, tau), u);
  CHECK(w.exterior().kind() == ExteriorModel::Kind::VerticalProfile);
  CHECK(w.exterior().limit_lo() == doctest::Approx(0.0));
  CHECK(w.exterior().limit_hi() == doctest::Approx(0.0));
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-12.0, 12.0);
    CHECK(w.evaluate(vec1(x)) > 0.0);
  }
  CHECK(w.evaluate(vec1(50.0)) == doctest::Approx(0.0).epsilon(1e-12));

  // exactness at lattice points for aligned tau
  for (Eigen::Index f = 0; f < w.grid().size(); ++f) {
    const VectorXd x = w.grid().node(f);
    const double direct = u.evaluate(vec1(x[0] + tau)) - u.evaluate(x);
    CHECK(w.value_at(f) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("difference rejects incompatible lattices") {
  Grid a = grid1d(-1.0, 1.0, 0.25);
  Grid b = grid1d(-1.0, 1.0, 0.2);
  GridFunction ua = sample_function(a, ExteriorModel::constant(1.0));
  GridFunction ub = sample_function(b, ExteriorModel::constant(1.0));
  CHECK_THROWS(difference(ua, ub));
}

TEST_CASE("construction rejects non-finite values and growth violations") {
  Grid g = grid1d(-1.0, 1.0, 0.5);
  VectorXd bad(g.size());
  bad.setZero();
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(GridFunction(g, bad, ExteriorModel::zero()));

  // closure growing like |x|^2 but declared bounded
  CHECK_THROWS(sample_function(
      g, ExteriorModel::closed_form([](const VectorXd& x) { return x[0] * x[0]; }, 0.0, 1.0)));
}

TEST_CASE("positive part") {
  Grid g = grid1d(-4.0, 4.0, 0.5);
  GridFunction u = sample_function(g, tanh_profile());
  GridFunction up = positive_part(u);
  for (double x : {-9.0, -2.0, -0.25, 0.25, 2.0, 9.0}) {
    CHECK(up.evaluate(vec1(x)) ==
          doctest::Approx(std::max(u.evaluate(vec1(x)), 0.0)).epsilon(1e-12));
  }
  CHECK(up.exterior().limit_lo() == 0.0);
  CHECK(up.exterior().limit_hi() == 1.0);
}

TEST_CASE("integrability gate converges for admissible data and flags bad growth") {
  auto p = make_params(1, 0.5);
  Grid g = grid1d(-2.0, 2.0, 0.25);
  GridFunction u = sample_function(g, tanh_profile());
  auto rep = l2s_gate(p, u);
  CHECK(rep.growth_admissible);
  CHECK(rep.converging);
  CHECK(rep.worst_tail_ratio < 1.0);

  // growth alpha = 0.9 is not admissible for 2s = 0.5
  auto p_small = make_params(1, 0.25);
  GridFunction v = sample_function(
      g, ExteriorModel::closed_form(
             [](const VectorXd& x) { return std::pow(1.0 + std::abs(x[0]), 0.9); }, 0.9, 1.0));
  auto rep2 = l2s_gate(p_small, v);
  CHECK_FALSE(rep2.growth_admissible);
}

TEST_CASE("hull mismatch is reported") {
  Grid g = grid1d(-1.0, 1.0, 0.5);
  // values say 1 at the hull, exterior says 0: mismatch 1
  GridFunction u = sample_function(g, [](const VectorXd&) { return 1.0; }, ExteriorModel::zero());
  CHECK(u.hull_mismatch() == doctest::Approx(1.0));
  GridFunction v = sample_function(g, ExteriorModel::constant(3.0));
  CHECK(v.hull_mismatch() == doctest::Approx(0.0));
}

TEST_SUITE_END();
