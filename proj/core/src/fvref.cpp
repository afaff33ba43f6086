#include "ccl/fvref.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccl/errors.hpp"

namespace ccl {
namespace {

constexpr std::array<double, 5> kGaussNodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights{0.2369268850561891, 0.4786286704993665,
                                              0.5688888888888889, 0.4786286704993665,
                                              0.2369268850561891};

double van_leer(double theta) { return (theta + std::abs(theta)) / (1.0 + std::abs(theta)); }

// Minimizer of F on [a, b] (F' increasing).
double sonic_point(const ConvexFlux& flux, double a, double b) {
  if (flux.Fprime(a) >= 0.0) return a;
  if (flux.Fprime(b) <= 0.0) return b;
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    if (flux.Fprime(m) < 0.0)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

double max_speed(const FvGrid& grid, const ConvexFlux& flux) {
  // |F'| is maximal at the data extremes for monotone F'.
  const auto [mn, mx] = std::minmax_element(grid.cell_averages.begin(), grid.cell_averages.end());
  return std::max(std::abs(flux.Fprime(*mn)), std::abs(flux.Fprime(*mx)));
}

}  // namespace

double FvGrid::mass() const noexcept {
  double s = 0.0;
  for (double v : cell_averages) s += v;
  return s * dx();
}

double FvGrid::total_variation() const noexcept {
  double tv = 0.0;
  for (std::size_t i = 1; i < cell_averages.size(); ++i)
    tv += std::abs(cell_averages[i] - cell_averages[i - 1]);
  return tv;
}

FvGrid init_from(const PiecewiseFunction& g, double lo, double hi, std::size_t ncells) {
  if (ncells < 2) throw ConfigError("init_from: need at least 2 cells");
  if (!(lo < hi)) throw ConfigError("init_from: need lo < hi");
  FvGrid grid;
  grid.lo = lo;
  grid.hi = hi;
  grid.ncells = ncells;
  grid.cell_averages.resize(ncells);
  const double dx = grid.dx();
  auto g_at = [&](double y) {
    if (y <= g.lo()) return g.left_value(0);
    if (y >= g.hi()) return g.right_value(g.num_pieces() - 1);
    return g(y);
  };
  for (std::size_t i = 0; i < ncells; ++i) {
    const double c = grid.center(i);
    double s = 0.0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) s += kGaussWeights[k] * g_at(c + 0.5 * dx * kGaussNodes[k]);
    grid.cell_averages[i] = 0.5 * s;
  }
  return grid;
}

double godunov_flux(const ConvexFlux& flux, double ul, double ur, double sonic) {
  if (ul <= ur) return flux.F(std::clamp(sonic, ul, ur));
  return std::max(flux.F(ul), flux.F(ur));
}

double max_stable_dt(const FvGrid& grid, const ConvexFlux& flux) {
  const double s = max_speed(grid, flux);
  return s > 0.0 ? grid.cfl_target * grid.dx() / s : std::numeric_limits<double>::infinity();
}

FvGrid step(const FvGrid& grid, const ConvexFlux& flux, double dt, Limiter limiter) {
  if (!(dt >= 0.0)) throw ConfigError("step: dt must be non-negative");
  const std::size_t n = grid.ncells;
  const double dx = grid.dx();
  const double smax = max_speed(grid, flux);
  if (dt * smax > grid.cfl_target * dx * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violation: dt = " << dt << " exceeds " << grid.cfl_target * dx / smax;
    throw SolverError(msg.str());
  }

  // Two ghost cells per side, zero-order extrapolation.
  std::vector<double> q(n + 4);
  std::copy(grid.cell_averages.begin(), grid.cell_averages.end(), q.begin() + 2);
  q[0] = q[1] = grid.cell_averages.front();
  q[n + 2] = q[n + 3] = grid.cell_averages.back();

  const auto [mn, mx] = std::minmax_element(q.begin(), q.end());
  const double sonic = sonic_point(flux, *mn, *mx);
  const double nu = dt / dx;

  // Interface k sits between q[k-1] and q[k], k = 1 .. n+3.
  std::vector<double> wave(n + 4, 0.0);
  std::vector<double> speed(n + 4, 0.0);
  for (std::size_t k = 1; k < n + 4; ++k) {
    wave[k] = q[k] - q[k - 1];
    speed[k] = wave[k] != 0.0 ? (flux.F(q[k]) - flux.F(q[k - 1])) / wave[k] : flux.Fprime(q[k]);
  }

  // Fluxes at the n+1 physical interfaces k = 2 .. n+2.
  std::vector<double> numflux(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const std::size_t k = j + 2;
    double f = godunov_flux(flux, q[k - 1], q[k], sonic);
    if (limiter != Limiter::kNone && wave[k] != 0.0) {
      const double s = speed[k];
      const std::size_t upwind = s > 0.0 ? k - 1 : k + 1;
      const double theta = wave[upwind] / wave[k];
      f += 0.5 * std::abs(s) * (1.0 - nu * std::abs(s)) * van_leer(theta) * wave[k];
    }
    numflux[j] = f;
  }

  FvGrid next = grid;
  for (std::size_t i = 0; i < n; ++i)
    next.cell_averages[i] = grid.cell_averages[i] - nu * (numflux[i + 1] - numflux[i]);
  next.time = grid.time + dt;
  next.boundary_inflow = grid.boundary_inflow + dt * (numflux[0] - numflux[n]);
  return next;
}

FvGrid run_until(FvGrid grid, const ConvexFlux& flux, double t_end, Limiter limiter) {
  if (t_end < grid.time) throw ConfigError("run_until: t_end is before the grid time");
  while (grid.time < t_end) {
    const double remaining = t_end - grid.time;
    const double dt = std::min(max_stable_dt(grid, flux), remaining);
    grid = step(grid, flux, dt, limiter);
    if (dt == remaining) grid.time = t_end;
  }
  return grid;
}

}  // namespace ccl
