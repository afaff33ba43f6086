#include "ccl/pmp_bvp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccl/chebyshev.hpp"
#include "ccl/errors.hpp"

namespace ccl {
namespace {

double fd_step(double v) { return 6e-6 * (1.0 + std::abs(v)); }

struct Collocation {
  std::size_t n;           // polynomial degree
  std::vector<double> r;   // nodes on [0, t]; r[0] = t, r[n] = 0
  Eigen::MatrixXd D;       // d/dr on the nodes
};

Collocation make_collocation(std::size_t n, double t) {
  Collocation c{n, {}, {}};
  const auto s = cheb::lobatto_points(n);
  c.r.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) c.r[j] = 0.5 * t * (1.0 + s[j]);
  const auto d = cheb::differentiation_matrix(n);
  const auto m = static_cast<Eigen::Index>(n + 1);
  c.D.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) c.D(i, j) = d[static_cast<std::size_t>(i * m + j)] * 2.0 / t;
  return c;
}

class BvpSystem {
 public:
  BvpSystem(const ControlProblem& prob, const PiecewiseFunction& dg, double x0,
            const Terminal& terminal, const Collocation& col)
      : prob_(prob), dg_(dg), x0_(x0), terminal_(terminal), col_(col) {}

  double rhs_x(double x, double p) const { return prob_.alpha_star(x, p); }
  double rhs_p(double x, double p) const { return -prob_.dH_dx(x, p, prob_.alpha_star(x, p)); }

  Eigen::VectorXd residual(const Eigen::VectorXd& z) const {
    const auto m = static_cast<Eigen::Index>(col_.n + 1);
    const auto X = z.head(m);
    const auto P = z.tail(m);
    Eigen::VectorXd R(2 * m);
    R.head(m) = col_.D * X;
    R.tail(m) = col_.D * P;
    for (Eigen::Index j = 0; j < m; ++j) {
      R(j) -= rhs_x(X(j), P(j));
      R(m + j) -= rhs_p(X(j), P(j));
    }
    R(m - 1) = X(m - 1) - x0_;  // x(0) = x
    if (const auto* pin = std::get_if<PinnedTerminal>(&terminal_))
      R(m) = X(0) - pin->a;
    else
      R(m) = P(0) - prob_.terminal.g_at(X(0));
    return R;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const {
    const auto m = static_cast<Eigen::Index>(col_.n + 1);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    J.topLeftCorner(m, m) = col_.D;
    J.bottomRightCorner(m, m) = col_.D;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double x = z(j);
      const double p = z(m + j);
      const double hx = fd_step(x);
      const double hp = fd_step(p);
      J(j, j) -= (rhs_x(x + hx, p) - rhs_x(x - hx, p)) / (2.0 * hx);
      J(j, m + j) -= (rhs_x(x, p + hp) - rhs_x(x, p - hp)) / (2.0 * hp);
      J(m + j, j) -= (rhs_p(x + hx, p) - rhs_p(x - hx, p)) / (2.0 * hx);
      J(m + j, m + j) -= (rhs_p(x, p + hp) - rhs_p(x, p - hp)) / (2.0 * hp);
    }
    J.row(m - 1).setZero();
    J(m - 1, m - 1) = 1.0;
    J.row(m).setZero();
    if (std::holds_alternative<PinnedTerminal>(terminal_)) {
      J(m, 0) = 1.0;
    } else {
      const double X = z(0);
      const double slope = (X >= dg_.lo() && X <= dg_.hi()) ? dg_(X) : 0.0;
      J(m, m) = 1.0;
      J(m, 0) = -slope;
    }
    return J;
  }

 private:
  const ControlProblem& prob_;
  const PiecewiseFunction& dg_;
  double x0_;
  const Terminal& terminal_;
  const Collocation& col_;
};

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double tail_ratio(const std::vector<double>& values) {
  const auto c = cheb::coeffs_from_lobatto(values);
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  double tail = 0.0;
  for (std::size_t k = c.size() - std::min<std::size_t>(3, c.size()); k < c.size(); ++k)
    tail = std::max(tail, std::abs(c[k]));
  return tail / std::max(1.0, scale);
}

PiecewiseFunction as_function(const std::vector<double>& node_values, double t) {
  // node_values are ordered r = t .. 0, i.e. s = 1 .. -1, matching lobatto_points.
  return PiecewiseFunction({0.0, t}, {cheb::coeffs_from_lobatto(node_values)});
}

}  // namespace

BvpSolution solve_bvp(const ControlProblem& prob, double x, double t, const Terminal& terminal,
                      const TrajectoryGuess& guess, const BvpOptions& options) {
  if (!(t > 0.0)) throw ConfigError("solve_bvp: requires t > 0");
  if (options.degrees.empty()) throw ConfigError("solve_bvp: no collocation degrees");
  const PiecewiseFunction dg = derivative(prob.terminal.g);

  BvpSolution sol;
  std::function<double(double)> seed_x = guess.x;
  std::function<double(double)> seed_p = guess.p;

  for (std::size_t n : options.degrees) {
    const auto col = make_collocation(n, t);
    const auto m = static_cast<Eigen::Index>(n + 1);
    Eigen::VectorXd z(2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
      z(j) = seed_x(col.r[static_cast<std::size_t>(j)]);
      z(m + j) = seed_p(col.r[static_cast<std::size_t>(j)]);
    }
    BvpSystem sys(prob, dg, x, terminal, col);

    // Steps are accepted on the Euclidean merit |R|, for which the Newton
    // direction is a descent direction; convergence is judged in max norm.
    Eigen::VectorXd R = sys.residual(z);
    double res = max_abs(R);
    double merit = R.norm();
    bool newton_ok = std::isfinite(merit);
    int it = 0;
    for (; newton_ok && res > options.tol && it < options.max_newton; ++it) {
      const Eigen::VectorXd step = sys.jacobian(z).partialPivLu().solve(-R);
      if (!step.allFinite()) {
        newton_ok = false;
        break;
      }
      double lambda = 1.0;
      bool accepted = false;
      for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
        const Eigen::VectorXd trial = z + lambda * step;
        const Eigen::VectorXd trial_R = sys.residual(trial);
        const double trial_merit = trial_R.norm();
        if (std::isfinite(trial_merit) && trial_merit < merit) {
          z = trial;
          R = trial_R;
          merit = trial_merit;
          res = max_abs(R);
          accepted = true;
          break;
        }
      }
      if (!accepted) newton_ok = false;
    }
    sol.newton_iterations += it;
    sol.residual = res;
    sol.degree = n;
    newton_ok = newton_ok && res <= options.tol;

    std::vector<double> xs(static_cast<std::size_t>(m));
    std::vector<double> ps(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
      xs[static_cast<std::size_t>(j)] = z(j);
      ps[static_cast<std::size_t>(j)] = z(m + j);
    }
    if (!newton_ok) {
      sol.converged = false;
      if (std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); }) &&
          std::all_of(ps.begin(), ps.end(), [](double v) { return std::isfinite(v); })) {
        sol.trajectory_x = as_function(xs, t);
        sol.trajectory_p = as_function(ps, t);
      }
      return sol;
    }

    sol.trajectory_x = as_function(xs, t);
    sol.trajectory_p = as_function(ps, t);
    sol.tail = std::max(tail_ratio(xs), tail_ratio(ps));

    // Running cost by Clenshaw-Curtis quadrature on the same nodes.
    const auto w = cheb::clenshaw_curtis_weights(n);
    double running = 0.0;
    for (std::size_t j = 0; j <= n; ++j)
      running += w[j] * prob.lagrangian(xs[j], prob.alpha_star(xs[j], ps[j]));
    sol.cost = 0.5 * t * running + prob.terminal.G_at(xs[0]);

    sol.converged = sol.tail <= options.tol;
    if (sol.converged) return sol;
    seed_x = [f = sol.trajectory_x](double r) { return f(std::clamp(r, f.lo(), f.hi())); };
    seed_p = [f = sol.trajectory_p](double r) { return f(std::clamp(r, f.lo(), f.hi())); };
  }
  return sol;
}

SolutionSample minimum_value_point(const ControlProblem& prob, const CandidateEnumerator& enumerate,
                                   double x, double t, const BvpOptions& options) {
  if (t < 0.0) throw ConfigError("minimum_value_point: requires t >= 0");
  if (t == 0.0) return {x, t, prob.terminal.g_at(x), prob.terminal.G_at(x), 1};

  const auto candidates = enumerate(x, t);
  struct Converged {
    double cost;
    double u;
  };
  std::vector<Converged> ok;
  double worst_residual = 0.0;
  for (const auto& cand : candidates) {
    const auto sol = solve_bvp(prob, x, t, cand.terminal, cand.guess, options);
    if (sol.converged) {
      ok.push_back({sol.cost, sol.u()});
    } else {
      worst_residual = std::max(worst_residual, std::max(sol.residual, sol.tail));
    }
  }
  if (ok.empty()) {
    std::ostringstream msg;
    msg << "no boundary value problem converged at (x, t) = (" << x << ", " << t
        << "); " << candidates.size() << " candidates, last residual " << worst_residual;
    throw SolverError(msg.str());
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : ok) best = std::min(best, c.cost);
  const double band = 1e-12 * (1.0 + std::abs(best));
  const Converged* pick = nullptr;
  for (const auto& c : ok)
    if (c.cost <= best + band && (pick == nullptr || c.u < pick->u)) pick = &c;
  return {x, t, pick->u, pick->cost, ok.size()};
}

ControlProblem control_problem_from_flux(const ConvexFlux& flux, InitialData init, double horizon) {
  ControlProblem prob;
  auto L = [flux](double alpha) { return lagrangian(flux, alpha).value; };
  prob.lagrangian = [L](double, double alpha) { return L(alpha); };
  prob.hamiltonian = [L](double, double p, double alpha) { return p * alpha + L(alpha); };
  prob.dH_dx = [](double, double, double) { return 0.0; };
  prob.alpha_star = [Fp = flux.Fprime](double, double p) { return -Fp(p); };
  prob.terminal = std::move(init);
  prob.horizon_T = horizon;
  prob.label = flux.label;
  return prob;
}

std::vector<LqrCandidate> lqr_candidates(double x, double t) {
  const double outer = x / std::cosh(t);
  const double inner = outer - std::tanh(t);
  std::vector<LqrCandidate> all{
      {outer, LqrBranch::kOuter, outer >= 0.0 || outer <= -1.0},
      {inner, LqrBranch::kInner, inner > -1.0 && inner < 0.0},
      {0.0, LqrBranch::kPinnedZero, true},
      {-1.0, LqrBranch::kPinnedMinusOne, true},
  };
  std::vector<LqrCandidate> out;
  for (const auto& c : all) {
    if (c.valid && std::any_of(out.begin(), out.end(),
                               [&](const LqrCandidate& o) { return o.valid && o.X == c.X; }))
      continue;
    out.push_back(c);
  }
  return out;
}

LqrTrajectory lqr_trajectory(double x, double t, double X) {
  LqrTrajectory tr;
  tr.C = (X - x * std::exp(-t)) / (std::exp(t) - std::exp(-t));
  tr.p0 = x - 2.0 * tr.C;
  tr.P = x / std::sinh(t) - X / std::tanh(t);
  return tr;
}

double lqr_cost(double x, double t, double X, const InitialData& terminal) {
  return 0.5 * (x * x + X * X) / std::tanh(t) - x * X / std::sinh(t) + terminal.G_at(X);
}

}  // namespace ccl
