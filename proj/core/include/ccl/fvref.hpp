#pragma once

// Second-order finite-volume reference solver for u_t + F(u)_x = 0 with a
// convex F: exact Godunov flux plus a limited Lax-Wendroff correction on the
// wave strengths, outflow boundaries.

#include <cstddef>
#include <vector>

#include "ccl/legendre.hpp"
#include "ccl/piecewise.hpp"

namespace ccl {

enum class Limiter { kVanLeer, kNone };

struct FvGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t ncells = 0;
  std::vector<double> cell_averages;
  double time = 0.0;
  double cfl_target = 0.9;
  /// Integral over time of the flux entering at lo minus the flux leaving at hi.
  double boundary_inflow = 0.0;

  double dx() const noexcept { return (hi - lo) / static_cast<double>(ncells); }
  double center(std::size_t i) const noexcept { return lo + (static_cast<double>(i) + 0.5) * dx(); }
  /// sum(cell_averages) * dx
  double mass() const noexcept;
  double total_variation() const noexcept;
};

/// Cell averages by 5-point Gauss-Legendre quadrature of g on every cell;
/// g is extended by its endpoint values outside its domain.
FvGrid init_from(const PiecewiseFunction& g, double lo, double hi, std::size_t ncells);

/// Largest stable step for the current data.
double max_stable_dt(const FvGrid& grid, const ConvexFlux& flux);

/// One conservative update.  Throws SolverError when dt exceeds
/// cfl_target * dx / max|F'(u)|.
FvGrid step(const FvGrid& grid, const ConvexFlux& flux, double dt, Limiter limiter = Limiter::kVanLeer);

/// Steps at cfl_target until t_end; the last step is shortened to land on it.
FvGrid run_until(FvGrid grid, const ConvexFlux& flux, double t_end, Limiter limiter = Limiter::kVanLeer);

/// exact Godunov flux for a convex F with minimizer sonic.
double godunov_flux(const ConvexFlux& flux, double ul, double ur, double sonic);

}  // namespace ccl
