#include "fraclab/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <limits>

namespace fraclab {

namespace {

Eigen::VectorXd apply_f(const Nonlinearity& f, const Eigen::VectorXd& U) {
  Eigen::VectorXd out(U.size());
  for (Eigen::Index i = 0; i < U.size(); ++i) out[i] = f(U[i]);
  return out;
}

Eigen::VectorXd initial_guess(const AssembledOperator& op, const ExteriorModel& phi,
                              const Eigen::VectorXd& g, const SolverConfig& cfg) {
  const Eigen::Index m = static_cast<Eigen::Index>(op.unknowns().size());
  switch (cfg.initial_guess) {
    case SolverConfig::Guess::Supplied:
      if (cfg.supplied.size() != m)
        throw std::invalid_argument("solve: supplied guess has the wrong size");
      return cfg.supplied;
    case SolverConfig::Guess::HarmonicExtension:
      return op.matrix().partialPivLu().solve(-g);
    case SolverConfig::Guess::Ramp:
      break;
  }
  // vertical ramp between the exterior limits across the unknown extent
  double lo_lim = 0.0, hi_lim = 0.0;
  if (phi.has_limits()) {
    lo_lim = phi.limit_lo();
    hi_lim = phi.limit_hi();
  }
  const int axis = op.grid().dim() - 1;
  double xn_lo = std::numeric_limits<double>::infinity(), xn_hi = -xn_lo;
  for (Eigen::Index r = 0; r < m; ++r) {
    const double xn = op.grid().node(op.unknowns()[r])[axis];
    xn_lo = std::min(xn_lo, xn);
    xn_hi = std::max(xn_hi, xn);
  }
  Eigen::VectorXd U(m);
  const double span = std::max(xn_hi - xn_lo, 1e-300);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double xn = op.grid().node(op.unknowns()[r])[axis];
    double v = lo_lim + (hi_lim - lo_lim) * (xn - xn_lo) / span;
    v = std::min(std::max(v, std::min(lo_lim, hi_lim)), std::max(lo_lim, hi_lim));
    U[r] = v;
  }
  return U;
}

// damped Newton on F(U) = A U + g - f(U); returns the final iterate and log
SolveLog newton(const AssembledOperator& op, const Eigen::VectorXd& g, const Nonlinearity& f,
                const SolverConfig& cfg, Eigen::VectorXd& U) {
  SolveLog log;
  const Eigen::MatrixXd& A = op.matrix();
  const Eigen::Index m = A.rows();

  Eigen::VectorXd F = A * U + g - apply_f(f, U);
  double rinf = F.lpNorm<Eigen::Infinity>();
  double r2 = F.norm();
  log.residual_history.push_back(rinf);

  for (int it = 0; it < cfg.max_newton_iters && rinf > cfg.residual_tol; ++it) {
    Eigen::MatrixXd J = A;
    for (Eigen::Index i = 0; i < m; ++i) J(i, i) -= f.derivative(U[i]);
    Eigen::VectorXd step = J.partialPivLu().solve(-F);

    // backtracking on the 2-norm: the exact Newton direction descends it
    double lambda = 1.0;
    Eigen::VectorXd U_next, F_next;
    double r2_next = r2;
    while (lambda > 1e-10) {
      U_next = U + lambda * step;
      F_next = A * U_next + g - apply_f(f, U_next);
      r2_next = F_next.norm();
      if (r2_next < (1.0 - 1e-4 * lambda) * r2) break;
      lambda *= cfg.damping;
    }
    if (!(r2_next < r2)) {
      log.iterations = it;
      log.converged = false;
      return log;  // stagnation; history tells the story
    }
    U = U_next;
    F = F_next;
    r2 = r2_next;
    rinf = F.lpNorm<Eigen::Infinity>();
    log.residual_history.push_back(rinf);
    log.iterations = it + 1;
  }
  log.converged = rinf <= cfg.residual_tol;
  return log;
}

GridFunction assemble_solution(const AssembledOperator& op, const ExteriorModel& phi,
                               const Eigen::VectorXd& U) {
  const Grid& g = op.grid();
  Eigen::VectorXd values(g.size());
  for (Eigen::Index fidx = 0; fidx < g.size(); ++fidx) {
    const Eigen::Index row = op.row_of(fidx);
    values[fidx] = row >= 0 ? U[row] : phi(g.node(fidx));
  }
  return GridFunction(g, std::move(values), phi, "solution");
}

}  // namespace

SolveResult solve_dirichlet(const FracParams& p, const DomainSpec& omega,
                            const ExteriorModel& phi, const Nonlinearity& f, const Grid& grid,
                            const QuadratureSpec& q, const SolverConfig& cfg) {
  if (!omega.bounded()) throw std::invalid_argument("solve_dirichlet: domain must be bounded");
  auto op = assemble_linear_operator(
      p, grid, [&omega](const Eigen::VectorXd& x) { return omega.contains(x); }, q, phi);
  const Eigen::VectorXd g = op.load(phi);

  Eigen::VectorXd U = initial_guess(op, phi, g, cfg);
  SolveLog log = newton(op, g, f, cfg, U);
  if (!log.converged && cfg.initial_guess == SolverConfig::Guess::Ramp) {
    // retry from the linear-solve extension
    SolverConfig cfg2 = cfg;
    cfg2.initial_guess = SolverConfig::Guess::HarmonicExtension;
    Eigen::VectorXd U2 = initial_guess(op, phi, g, cfg2);
    SolveLog log2 = newton(op, g, f, cfg, U2);
    log2.diagnostics.emplace_back("restarted_from_extension", 1.0);
    if (log2.converged || log2.residual_history.back() < log.residual_history.back()) {
      U = U2;
      log = log2;
    }
  }
  return SolveResult{assemble_solution(op, phi, U), std::move(log)};
}

ExteriorModel layer_exterior(double L) {
  return ExteriorModel::vertical_profile(
      [L](double t) { return t >= L ? 1.0 : (t <= -L ? -1.0 : t / L); }, -1.0, 1.0, L);
}

SolveResult solve_layer_1d(const FracParams& p, double L, const Nonlinearity& f, const Grid& grid,
                           const QuadratureSpec& q, const SolverConfig& cfg) {
  if (p.n != 1 || grid.dim() != 1)
    throw std::invalid_argument("solve_layer_1d: one-dimensional only");
  if (!(L > 0.0)) throw std::invalid_argument("solve_layer_1d: L must be positive");
  if (!f.flat_delta())
    throw std::invalid_argument("solve_layer_1d: nonlinearity needs a declared flat width");

  auto omega = DomainSpec::slab(1, 0, -L, L);
  SolveResult res = solve_dirichlet(p, omega, layer_exterior(L), f, grid, q, cfg);

  // boundary-layer diagnostics
  for (double margin : {0.5, 1.0, 2.0, 4.0}) {
    if (margin >= L) break;
    Eigen::VectorXd xp(1), xm(1);
    xp << L - margin;
    xm << -(L - margin);
    res.log.diagnostics.emplace_back("upper_gap_at_margin_" + std::to_string(margin),
                                     std::abs(res.u.evaluate(xp) - 1.0));
    res.log.diagnostics.emplace_back("lower_gap_at_margin_" + std::to_string(margin),
                                     std::abs(res.u.evaluate(xm) + 1.0));
  }
  // measured slab threshold: least a with u >= 1-delta above a and
  // u <= -1+delta below -a, over lattice nodes
  const double delta = *f.flat_delta();
  double a = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i)[0];
    const double v = res.u.value_at(i);
    if (x > 0.0 && v < 1.0 - delta) a = std::max(a, x);
    if (x < 0.0 && v > -1.0 + delta) a = std::max(a, -x);
  }
  res.log.diagnostics.emplace_back("measured_slab_threshold", a);
  return res;
}

double residual_field_max(const FracParams& p, const GridFunction& u, const Nonlinearity& f,
                          const std::vector<Eigen::VectorXd>& probes, const QuadratureSpec& q) {
  double worst = 0.0;
  for (const auto& x : probes) {
    const double lhs = frac_laplacian_at(p, u, x, q);
    worst = std::max(worst, std::abs(lhs - f(u.evaluate(x))));
  }
  return worst;
}

}  // namespace fraclab
