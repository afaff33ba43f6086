#pragma once

// Pointwise entropy solutions of u_t + F(u)_x = 0, u(x, 0) = g(x), for a
// space-independent convex flux.  Characteristics are straight lines
// x - F'(p) t, so the optimality conditions reduce to scalar equations in the
// costate p:
//
//   p = g(x - F'(p) t)        (foot lands where g is continuous)
//   a_k = x - F'(p) t         (foot lands on a discontinuity a_k of g)
//
// Every solution is a candidate; the one minimizing
//   J(p) = (p F'(p) - F(p)) t + G(x - F'(p) t)
// gives u(x, t) = p and w(x, t) = J.  No point depends on any other.

#include <cstddef>
#include <span>
#include <vector>

#include "ccl/legendre.hpp"
#include "ccl/piecewise.hpp"

namespace ccl {

/// Initial condition g, its continuous antiderivative G and the jump points
/// of g.  Outside [g.lo(), g.hi()] g is extended by its endpoint values and
/// G linearly with those slopes.
struct InitialData {
  PiecewiseFunction g;
  PiecewiseFunction G;
  std::vector<double> discontinuities;

  /// G = antiderivative(g); discontinuities = jumps above the threshold
  /// (default_jump_threshold(g) when threshold < 0).
  static InitialData from_g(PiecewiseFunction g, double jump_threshold = -1.0);

  double g_at(double y) const;
  double G_at(double y) const;
  Range g_range() const;
};

struct SolutionSample {
  double x = 0.0;
  double t = 0.0;
  double u = 0.0;
  double J = 0.0;  // minimal cost, w(x, t)
  std::size_t candidate_count = 0;
};

struct EntropyOptions {
  ApproxOptions approx{};
  RootOptions roots{};
  /// Candidates whose costs differ by at most tie_tol * (1 + |J|) are tied;
  /// the smaller costate wins.
  double tie_tol = 1e-12;
};

/// Reusable solver for one (flux, initial data) pair.  F' is tabulated once
/// at construction; all query methods are const and thread-safe.
class EntropySolver {
 public:
  EntropySolver(ConvexFlux flux, InitialData init, EntropyOptions options = {});

  const ConvexFlux& flux() const noexcept { return flux_; }
  const InitialData& init() const noexcept { return init_; }

  /// Sorted, de-duplicated costates solving either characteristic equation.
  /// Throws SolverError when there are none.
  std::vector<double> candidate_costates(double x, double t) const;

  double cost(double p, double x, double t) const;

  SolutionSample solve_point(double x, double t) const;

  /// Row-major over t (outer) then x (inner).  Output is identical for any
  /// worker count.
  std::vector<SolutionSample> solve_grid(std::span<const double> xs, std::span<const double> ts,
                                         bool parallel, std::size_t workers = 0) const;

  /// Costate interval searched for the jump-point equations.
  Interval jump_search_domain() const noexcept { return q_search_; }

 private:
  ConvexFlux flux_;
  InitialData init_;
  EntropyOptions options_;
  Range g_range_;
  Interval q_search_;
  PiecewiseFunction fprime_;  // F' on q_search_
};

std::vector<double> candidate_costates(const ConvexFlux& flux, const InitialData& init, double x,
                                       double t);
double cost(const ConvexFlux& flux, const InitialData& init, double p, double x, double t);
SolutionSample solve_point(const ConvexFlux& flux, const InitialData& init, double x, double t);
std::vector<SolutionSample> solve_grid(const ConvexFlux& flux, const InitialData& init,
                                       std::span<const double> xs, std::span<const double> ts,
                                       bool parallel);

struct HopfLaxResult {
  double w = 0.0;         // min over the y grid
  double argmin_y = 0.0;  // foot of the optimal characteristic
  double u = 0.0;         // (F')^{-1}((x - y*) / t)
};

/// Brute-force Hopf-Lax minimum  min_y { t L((y - x)/t) + G(y) }  over
/// `density` equally spaced y values covering every foot reachable from
/// range(g).  L comes from a numerical Legendre transform, not from the
/// p F'(p) - F(p) identity.  Test oracle only; requires t > 0.
HopfLaxResult hopf_lax_oracle(const ConvexFlux& flux, const InitialData& init, double x, double t,
                              std::size_t density);

}  // namespace ccl
