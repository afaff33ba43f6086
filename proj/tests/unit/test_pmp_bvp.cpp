#include <doctest.h>

#include <cmath>

#include "ccl/errors.hpp"
#include "ccl/pmp_bvp.hpp"
#include "ccl/problems.hpp"

using namespace ccl;

namespace {

const ProblemSpec& lqr() { return find_problem("lqr_spacedependent"); }
const ProblemSpec& zhang() { return find_problem("zhang_spacedependent"); }
const ControlProblem& control(const ProblemSpec& s) { return std::get<ControlProblem>(s.flux); }

double zhang_exact(double x, double t) { return -std::exp(-10.0 * x) / (1.0 + 9.0 * std::exp(-10.0 * t)); }

TrajectoryGuess frozen(double x, double p) {
  return {[x](double) { return x; }, [p](double) { return p; }};
}

}  // namespace

TEST_CASE("closed-form candidates at (0, 1)") {
  const auto c = lqr_candidates(0.0, 1.0);
  std::vector<double> valid;
  for (const auto& k : c)
    if (k.valid) valid.push_back(k.X);
  REQUIRE(valid.size() == 3);
  CHECK(valid[0] == 0.0);
  CHECK(valid[1] == doctest::Approx(-std::tanh(1.0)).epsilon(1e-15));
  CHECK(valid[2] == -1.0);
}

TEST_CASE("closed-form trajectory constants") {
  const double x = 0.7, t = 1.3, X = -0.4;
  const auto tr = lqr_trajectory(x, t, X);
  // x(t) = X and p(t) = P from the explicit solution
  CHECK((x - tr.C) * std::exp(-t) + tr.C * std::exp(t) == doctest::Approx(X).epsilon(1e-14));
  CHECK((x - tr.C) * std::exp(-t) - tr.C * std::exp(t) == doctest::Approx(tr.P).epsilon(1e-14));
  CHECK(tr.p0 == doctest::Approx(x - 2 * tr.C).epsilon(1e-15));
}

TEST_CASE("minimum value at (0, 1) is sech(1)") {
  const auto s = minimum_value_point(control(lqr()), lqr().enumerator, 0.0, 1.0);
  CHECK(std::abs(s.u - 1.0 / std::cosh(1.0)) < 1e-9);
  CHECK(std::abs(s.J - (1.0 - 0.5 * std::tanh(1.0))) < 1e-9);
}

TEST_CASE("collocation cost matches the closed-form cost") {
  for (auto [x, t] : {std::pair{0.4, 0.8}, {-0.6, 1.5}, {1.7, 0.3}}) {
    for (const auto& cand : lqr().enumerator(x, t)) {
      const auto sol = solve_bvp(control(lqr()), x, t, cand.terminal, cand.guess);
      REQUIRE(sol.converged);
      const double X = sol.trajectory_x(t);
      CAPTURE(cand.tag);
      CHECK(std::abs(sol.cost - lqr_cost(x, t, X, lqr().init)) < 1e-8);
      CHECK(std::abs(sol.u() - lqr_trajectory(x, t, X).p0) < 1e-8);
    }
  }
}

TEST_CASE("Newton converges from several seeds to the same solution") {
  const double x = 0.3, t = 0.5;
  const double g = -std::exp(-10.0 * x) / 10.0;
  double first = 0.0;
  const double scales[] = {0.5, 0.8, 1.0, 1.25, 1.5};
  for (int k = 0; k < 5; ++k) {
    const auto sol = solve_bvp(control(zhang()), x, t, FreeTerminal{}, frozen(x, g * scales[k]));
    REQUIRE(sol.converged);
    if (k == 0) first = sol.u();
    CHECK(std::abs(sol.u() - first) < 1e-10);
  }
  CHECK(std::abs(first - zhang_exact(x, t)) < 1e-9);
}

TEST_CASE("Hamiltonian is conserved along the optimal trajectory") {
  const auto& prob = control(zhang());
  const double x = 0.2, t = 0.6;
  const auto sol = solve_bvp(prob, x, t, FreeTerminal{}, frozen(x, -std::exp(-2.0) / 10.0));
  REQUIRE(sol.converged);
  auto H = [&](double r) {
    const double X = sol.trajectory_x(r), P = sol.trajectory_p(r);
    return prob.hamiltonian(X, P, prob.alpha_star(X, P));
  };
  const double h0 = H(0.0);
  for (double r = 0.0; r <= t; r += t / 17) CHECK(std::abs(H(r) - h0) < 1e-8 * (1.0 + std::abs(h0)));
}

TEST_CASE("costate is the spatial gradient of the value") {
  const double x = 0.45, t = 0.4, h = 1e-5;
  auto w = [&](double y) { return minimum_value_point(control(zhang()), zhang().enumerator, y, t).J; };
  const double u = minimum_value_point(control(zhang()), zhang().enumerator, x, t).u;
  CHECK(std::abs((w(x + h) - w(x - h)) / (2 * h) - u) < 1e-6);
}

TEST_CASE("space-independent flux through the control formulation") {
  const auto& spec = find_problem("burgers_sine");
  const auto& flux = std::get<ConvexFlux>(spec.flux);
  const auto prob = control_problem_from_flux(flux, spec.init, 1.0);
  const double x = 1.0, t = 0.1;
  const double g = spec.init.g_at(x);
  const auto sol = solve_bvp(prob, x, t, FreeTerminal{},
                             {[=](double r) { return x - g * r; }, [=](double) { return g; }});
  REQUIRE(sol.converged);
  const auto ref = solve_point(flux, spec.init, x, t);
  CHECK(std::abs(sol.u() - ref.u) < 1e-9);
  CHECK(std::abs(sol.cost - ref.J) < 1e-8);
}

TEST_CASE("divergence is reported, not thrown") {
  BvpOptions o;
  o.max_newton = 1;
  o.tol = 1e-14;
  const double x = 0.0, t = 0.6;
  const auto sol = solve_bvp(control(zhang()), x, t, FreeTerminal{}, frozen(x, 5.0), o);
  CHECK_FALSE(sol.converged);
  CHECK(sol.residual > 1e-14);
  CHECK_THROWS_AS(minimum_value_point(control(zhang()),
                                      [&](double, double) {
                                        return std::vector<BvpCandidate>{
                                            {FreeTerminal{}, frozen(x, 5.0), "bad"}};
                                      },
                                      x, t, o),
                  SolverError);
}

TEST_CASE("t = 0 returns the initial data") {
  const auto s = minimum_value_point(control(lqr()), lqr().enumerator, -0.5, 0.0);
  CHECK(s.u == 1.0);
}
