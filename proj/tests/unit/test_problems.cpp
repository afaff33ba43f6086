#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "ccl/errors.hpp"
#include "ccl/problems.hpp"

using namespace ccl;

TEST_CASE("catalog contents") {
  const auto& c = catalog();
  REQUIRE(c.size() == 7);
  std::set<std::string> names;
  for (const auto& s : c) {
    names.insert(s.name);
    CHECK(!s.notes.empty());
    CHECK(s.domain_x.width() > 0.0);
    CHECK(s.domain_t.lo > 0.0);
  }
  CHECK(names.size() == 7);
  CHECK(find_problem("lqr_spacedependent").is_control());
  CHECK_FALSE(find_problem("burgers_box").is_control());
  CHECK_THROWS_AS(find_problem("nope"), ConfigError);
  for (const auto& s : c)
    if (!s.is_control()) {
      CAPTURE(s.name);
      CHECK(validate_flux(std::get<ConvexFlux>(s.flux)).empty());
    }
}

TEST_CASE("analytic values") {
  CHECK(find_problem("burgers_box").analytic(0.5, 1.0) == 0.5);
  CHECK(find_problem("zhang_spacedependent").analytic(0.0, 0.1) ==
        doctest::Approx(-1.0 / (1.0 + 9.0 * std::exp(-1.0))).epsilon(1e-15));
  CHECK(find_problem("lqr_spacedependent").analytic(0.0, 1.0) ==
        doctest::Approx(1.0 / std::cosh(1.0)).epsilon(1e-15));
}

TEST_CASE("analytic solutions satisfy the PDE at smooth points") {
  const double h = 1e-5;
  {
    const auto& u = find_problem("burgers_box").analytic;  // inside the fan
    auto F = [&](double x, double t) { return 0.5 * u(x, t) * u(x, t); };
    for (auto [x, t] : {std::pair{0.5, 1.0}, {1.0, 3.0}}) {
      const double res = (u(x, t + h) - u(x, t - h)) / (2 * h) + (F(x + h, t) - F(x - h, t)) / (2 * h);
      CHECK(std::abs(res) < 1e-6);
    }
  }
  {
    const auto& u = find_problem("zhang_spacedependent").analytic;
    auto F = [&](double x, double t) {
      const double v = u(x, t);
      return (1.0 + v * std::exp(10.0 * x)) * v;
    };
    for (auto [x, t] : {std::pair{0.2, 0.3}, {0.7, 0.5}}) {
      const double res = (u(x, t + h) - u(x, t - h)) / (2 * h) + (F(x + h, t) - F(x - h, t)) / (2 * h);
      CHECK(std::abs(res) < 1e-6);
    }
  }
  {
    const auto& u = find_problem("lqr_spacedependent").analytic;
    auto F = [&](double x, double t) { return 0.5 * (u(x, t) * u(x, t) - x * x); };
    for (auto [x, t] : {std::pair{2.0, 0.5}, {-0.3, 0.4}, {-2.5, 1.0}}) {
      const double res = (u(x, t + h) - u(x, t - h)) / (2 * h) + (F(x + h, t) - F(x - h, t)) / (2 * h);
      CAPTURE(x);
      CHECK(std::abs(res) < 1e-6);
    }
  }
}

TEST_CASE("box error report excludes the shock") {
  const auto& spec = find_problem("burgers_box");
  const PointSolver solver(spec);
  const auto xs = linspace(-1.0, 3.0, 21);
  const auto ts = linspace(0.1, 4.0, 11);
  const auto r = analytic_error(spec, [&](double x, double t) { return solver.solve(x, t).u; }, xs, ts);
  CHECK(r.points + r.excluded_points == xs.size() * ts.size());
  CHECK(r.max_abs <= 1e-12);
}

TEST_CASE("method of characteristics reference before the shock") {
  const auto& spec = find_problem("burgers_sine");
  const auto& flux = std::get<ConvexFlux>(spec.flux);
  const PointSolver solver(spec);
  for (double x : linspace(0.0, 4.0, 9))
    for (double t : {0.02, 0.1}) {
      // Safeguarded Newton on u = g(x - u t) with g = 1 + sin(pi x).
      double u = 1.0;
      for (int k = 0; k < 60; ++k) {
        const double y = x - u * t;
        const double r = u - 1.0 - std::sin(M_PI * y);
        const double d = 1.0 + M_PI * t * std::cos(M_PI * y);
        u -= r / d;
      }
      CHECK(std::abs(characteristic_reference(flux, spec.init, x, t) - u) < 1e-10);
      CHECK(std::abs(solver.solve(x, t).u - u) < 1e-10);
    }
}

TEST_CASE("LWR densities stay in [0, 1]") {
  const auto& spec = find_problem("lwr_traffic");
  const PointSolver solver(spec);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ux(-30.0, 30.0), ut(0.1, 4.0);
  for (int i = 0; i < 100; ++i) {
    const double q = spec.report(solver.solve(ux(rng), ut(rng)).u);
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
  }
}

TEST_CASE("JSON round trip of a catalog problem") {
  const auto& spec = find_problem("burgers_box");
  const auto text = problem_to_json(spec);
  const auto back = problem_from_json(text);
  CHECK(back.name == spec.name);
  CHECK(back.domain_x.lo == spec.domain_x.lo);
  CHECK(back.init.discontinuities == spec.init.discontinuities);
  for (double x : {-0.5, 0.0, 0.3, 1.0, 2.0}) CHECK(back.init.g(x) == spec.init.g(x));
  const PointSolver a(spec), b(back);
  CHECK(a.solve(1.2, 1.0).u == b.solve(1.2, 1.0).u);
  CHECK(problem_from_json(problem_to_json(find_problem("lwr_traffic"))).transform == OutputTransform::kNegate);
  CHECK_THROWS_AS(problem_to_json(find_problem("lqr_spacedependent")), ConfigError);
}

TEST_CASE("tabulated flux and polynomial pieces from JSON") {
  const auto spec = load_problem_file(CCL_TEST_DATA_DIR "/burgers_ramp.json");
  const auto& f = std::get<ConvexFlux>(spec.flux);
  for (double p : {-3.0, -0.5, 0.0, 2.0}) {
    CHECK(f.Fprime(p) == doctest::Approx(p).epsilon(1e-15));
    CHECK(f.F(p) == doctest::Approx(0.5 * p * p).epsilon(1e-14));
  }
  CHECK(spec.init.g(0.25) == doctest::Approx(0.25).epsilon(1e-15));
  // Ramp on [0, 1] under Burgers before it breaks (t < 1): u = x / (1 + t).
  const PointSolver solver(spec);
  CHECK(solver.solve(0.5, 0.5).u == doctest::Approx(0.5 / 1.5).epsilon(1e-12));
}

TEST_CASE("malformed JSON") {
  CHECK_THROWS_AS(problem_from_json("{"), ConfigError);
  CHECK_THROWS_AS(problem_from_json(R"({"flux": {"kind": "cubic"}, "init": {}, "domain": {}})"), ConfigError);
  CHECK_THROWS_AS(problem_from_json(R"({"flux": {"kind": "quadratic"},
      "init": {"breakpoints": [0, 1], "pieces": []}, "domain": {"x": [0, 1], "t": [0, 1]}})"),
                  ConfigError);
  CHECK_THROWS_AS(problem_from_json(R"({"flux": {"kind": "quadratic", "a": -1},
      "init": {"breakpoints": [0, 1], "pieces": [{"const": 1}]}, "domain": {"x": [0, 1], "t": [0, 1]}})"),
                  ConfigError);
  CHECK_THROWS_AS(load_problem_file("/nonexistent.json"), ConfigError);
}
