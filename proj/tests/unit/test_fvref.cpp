#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ccl/errors.hpp"
#include "ccl/fvref.hpp"
#include "ccl/problems.hpp"

using namespace ccl;

namespace {

ConvexFlux advection() {
  ConvexFlux f;
  f.F = [](double u) { return u; };
  f.Fprime = [](double) { return 1.0; };
  return f;
}

ConvexFlux burgers() { return make_flux(FluxFamily{}); }

FvGrid grid_of(std::vector<double> q, double lo = 0.0, double hi = 1.0) {
  FvGrid g;
  g.lo = lo;
  g.hi = hi;
  g.ncells = q.size();
  g.cell_averages = std::move(q);
  return g;
}

}  // namespace

TEST_CASE("cell averages by Gauss quadrature") {
  const std::vector<double> one{1.0};
  auto g1 = init_from(PiecewiseFunction::constants({0.0, 1.0}, one), 0.0, 1.0, 10);
  for (double v : g1.cell_averages) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  const auto& box = find_problem("burgers_box").init.g;
  const auto g2 = init_from(box, -1.0, 3.0, 4);
  CHECK(g2.cell_averages == std::vector<double>{0.0, 1.0, 0.0, 0.0});

  const auto lin = PiecewiseFunction({0.0, 1.0}, {{0.5, 0.5}});  // x on [0, 1]
  const auto g3 = init_from(lin, 0.0, 1.0, 2);
  CHECK(g3.cell_averages[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g3.cell_averages[1] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(init_from(lin, 0.0, 1.0, 1), ConfigError);
}

TEST_CASE("constant states are preserved") {
  auto g = grid_of(std::vector<double>(8, 0.7));
  const auto f = burgers();
  const auto next = step(g, f, 0.5 * max_stable_dt(g, f));
  for (double v : next.cell_averages) CHECK(v == 0.7);
}

TEST_CASE("one step of linear advection matches the hand stencil") {
  const std::vector<double> q{0.0, 0.2, 0.9, 1.0, 0.4};
  auto g = grid_of(q, 0.0, 5.0);  // dx = 1
  const double nu = 0.5;
  const auto next = step(g, advection(), nu);

  // Ghosts: q[-2] = q[-1] = q[0], q[5] = q[6] = q[4].
  auto Q = [&](int i) { return q[static_cast<std::size_t>(std::clamp(i, 0, 4))]; };
  auto phi = [](double th) { return (th + std::abs(th)) / (1 + std::abs(th)); };
  auto flux = [&](int i) {  // interface between cells i-1 and i
    const double w = Q(i) - Q(i - 1);
    double f = Q(i - 1);
    if (w != 0.0) f += 0.5 * (1 - nu) * phi((Q(i - 1) - Q(i - 2)) / w) * w;
    return f;
  };
  for (int i = 0; i < 5; ++i) {
    const double expect = Q(i) - nu * (flux(i + 1) - flux(i));
    CHECK(next.cell_averages[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("without a limiter upwind at unit Courant number is an exact shift") {
  std::vector<double> q{0.0, 0.0, 1.0, 3.0, 2.0, 0.5, 0.0, 0.0};
  auto g = grid_of(q, 0.0, 8.0);
  g.cfl_target = 1.0;
  const auto next = step(g, advection(), 1.0, Limiter::kNone);
  for (std::size_t i = 1; i < q.size(); ++i) CHECK(next.cell_averages[i] == q[i - 1]);
}

TEST_CASE("conservation up to boundary fluxes and TVD on monotone data") {
  const auto f = burgers();
  PiecewiseFunction ramp({-2.0, 2.0}, {{0.5, -0.5}});  // 1 - ... decreasing from 1 to 0
  auto g = init_from(ramp, -3.0, 3.0, 120);
  for (int n = 0; n < 60; ++n) {
    const double dt = max_stable_dt(g, f);
    const auto next = step(g, f, dt);
    const double dm = next.mass() - g.mass();
    const double din = next.boundary_inflow - g.boundary_inflow;
    CHECK(std::abs(dm - din) <= 1e-12);
    CHECK(next.total_variation() <= g.total_variation() + 1e-10);
    CHECK(next.time > g.time);
    g = next;
  }
}

TEST_CASE("CFL violations throw") {
  auto g = grid_of({0.0, 1.0, 2.0, 1.0});
  CHECK_THROWS_AS(step(g, burgers(), 2.0 * max_stable_dt(g, burgers())), SolverError);
}

TEST_CASE("run_until lands on t_end") {
  const auto& box = find_problem("burgers_box").init.g;
  auto g = init_from(box, -1.0, 3.0, 80);
  const auto same = run_until(g, burgers(), 0.0);
  CHECK(same.cell_averages == g.cell_averages);
  const auto later = run_until(g, burgers(), 0.7);
  CHECK(later.time == 0.7);
  CHECK_THROWS_AS(run_until(later, burgers(), 0.5), ConfigError);
}

TEST_CASE("godunov flux cases") {
  const auto f = burgers();
  CHECK(godunov_flux(f, -1.0, 1.0, 0.0) == 0.0);   // transonic rarefaction
  CHECK(godunov_flux(f, 1.0, 2.0, 0.0) == 0.5);    // right-moving
  CHECK(godunov_flux(f, -2.0, -1.0, 0.0) == 0.5);  // left-moving, F(ur)
  CHECK(godunov_flux(f, 2.0, -1.0, 0.0) == 2.0);   // shock, max
}
