#pragma once

// Minimum-value solutions for space-dependent fluxes F(x, p) = -min_a H(x, p, a).
//
// For a query (x, t) every candidate optimal trajectory solves
//   x'(r) = a*(x, p),  p'(r) = -dH/dx(x, p, a*(x, p)),  x(0) = x
// with either p(t) = G'(x(t)) (free end) or x(t) = a_k (end pinned at a jump
// of g).  The candidate with the smallest running-plus-terminal cost wins and
// u(x, t) = p(0).

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ccl/entropy.hpp"
#include "ccl/piecewise.hpp"

namespace ccl {

struct ControlProblem {
  std::function<double(double x, double p, double alpha)> hamiltonian;
  std::function<double(double x, double p, double alpha)> dH_dx;
  std::function<double(double x, double p)> alpha_star;
  std::function<double(double x, double alpha)> lagrangian;
  /// Terminal data: g = G' and G, with the jump points a_k of g.
  InitialData terminal;
  double horizon_T = 1.0;
  std::string label;

  /// F(x, p) = -H(x, p, a*(x, p)).
  double flux(double x, double p) const { return -hamiltonian(x, p, alpha_star(x, p)); }
};

struct FreeTerminal {};
struct PinnedTerminal {
  double a = 0.0;
};
using Terminal = std::variant<FreeTerminal, PinnedTerminal>;

struct TrajectoryGuess {
  std::function<double(double r)> x;
  std::function<double(double r)> p;
};

struct BvpOptions {
  double tol = 1e-10;
  std::vector<std::size_t> degrees{16, 32, 64, 128};
  int max_newton = 100;
  int max_halvings = 10;
};

struct BvpSolution {
  PiecewiseFunction trajectory_x;  // on [0, t]
  PiecewiseFunction trajectory_p;  // on [0, t]
  double cost = 0.0;
  bool converged = false;
  /// Max collocation residual (dynamics and boundary rows).
  double residual = 0.0;
  /// Relative size of the trailing Chebyshev coefficients of x and p.
  double tail = 0.0;
  std::size_t degree = 0;
  int newton_iterations = 0;

  double u() const { return trajectory_p(trajectory_p.lo()); }
};

/// Chebyshev collocation of the two-point problem with damped Newton.
/// Degrees escalate through options.degrees until the trajectories are
/// resolved to options.tol.  Never throws on divergence: returns
/// converged = false with the last residual.
BvpSolution solve_bvp(const ControlProblem& prob, double x, double t, const Terminal& terminal,
                      const TrajectoryGuess& guess, const BvpOptions& options = {});

struct BvpCandidate {
  Terminal terminal;
  TrajectoryGuess guess;
  std::string tag;
};

/// Produces the candidate set (closed-form terminal states or Newton seeds)
/// for a query point.
using CandidateEnumerator = std::function<std::vector<BvpCandidate>(double x, double t)>;

/// Solves every candidate, keeps the converged ones and returns the one with
/// the smallest cost (ties within 1e-12 relative go to the smaller p(0)).
/// Throws SolverError when nothing converges.
SolutionSample minimum_value_point(const ControlProblem& prob, const CandidateEnumerator& enumerate,
                                   double x, double t, const BvpOptions& options = {});

/// Control problem equivalent to a space-independent convex flux:
/// a* = -F'(p), dH/dx = 0, L from the numerical Legendre transform.
ControlProblem control_problem_from_flux(const ConvexFlux& flux, InitialData init, double horizon);

// --- u_t + ((u^2 - x^2)/2)_x = 0 with g = 1 on [-1, 0] ----------------------

enum class LqrBranch { kOuter, kInner, kPinnedZero, kPinnedMinusOne };

struct LqrCandidate {
  double X = 0.0;  // terminal state x(t)
  LqrBranch branch = LqrBranch::kOuter;
  bool valid = false;
};

/// The four terminal-state families with their validity conditions,
///   X = x sech t               valid for X >= 0 or X <= -1
///   X = x sech t - tanh t      valid for -1 < X < 0
///   X = 0,  X = -1             always valid,
/// with valid duplicates (same X) removed.
std::vector<LqrCandidate> lqr_candidates(double x, double t);

struct LqrTrajectory {
  double C = 0.0;  // x(r) = (x - C) e^{-r} + C e^{r}
  double p0 = 0.0;
  double P = 0.0;  // p(t) = x csch t - X coth t
};

LqrTrajectory lqr_trajectory(double x, double t, double X);

/// J = (x^2 + X^2)/2 coth t - x X csch t + G(X).
double lqr_cost(double x, double t, double X, const InitialData& terminal);

}  // namespace ccl
