#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ccl/entropy.hpp"
#include "ccl/legendre.hpp"
#include "ccl/pmp_bvp.hpp"

namespace ccl {

/// Parametrized flux families that can be written to and read from JSON.
///   quadratic:  F = a p^2 / 2 + b p           (a > 0)
///   quartic:    F = a p^4 / 4                 (a > 0)
///   lwr:        F = vmax u (1 + u)            (u = -density)
///   tabulated:  F' piecewise linear through (nodes, slopes), F(nodes[0]) = F0
struct FluxFamily {
  std::string kind = "quadratic";
  double a = 1.0;
  double b = 0.0;
  double vmax = 1.0;
  std::vector<double> nodes;
  std::vector<double> slopes;
  double F0 = 0.0;
  Interval p_domain{-10.0, 10.0};
};

/// Throws ConfigError for unknown kinds or invalid parameters.
ConvexFlux make_flux(const FluxFamily& family);

enum class OutputTransform { kNone, kNegate };

struct ProblemSpec {
  std::string name;
  std::variant<ConvexFlux, ControlProblem> flux;
  InitialData init;
  /// Exact u(x, t) when known.
  std::function<double(double, double)> analytic;
  /// Independent pointwise reference (method of characteristics) for
  /// problems without a closed form.
  std::function<double(double, double)> reference;
  /// Shock positions at time t, for excluding points from error norms.
  std::function<std::vector<double>(double)> shock_loci;
  Interval domain_x;
  Interval domain_t;
  std::string notes;
  /// Reported quantity is -u (LWR density).
  OutputTransform transform = OutputTransform::kNone;
  /// Present for problems built from a flux family (JSON-serializable).
  std::optional<FluxFamily> family;
  /// Candidate generator for control problems.
  CandidateEnumerator enumerator;

  bool is_control() const noexcept { return std::holds_alternative<ControlProblem>(flux); }
  double report(double u) const noexcept { return transform == OutputTransform::kNegate ? -u : u; }
};

/// burgers_box, burgers_sine, burgers_nwave, burgers_wiggly, lwr_traffic,
/// lqr_spacedependent, zhang_spacedependent.
const std::vector<ProblemSpec>& catalog();

/// Throws ConfigError for unknown names.
const ProblemSpec& find_problem(const std::string& name);

/// Pointwise solver for either kind of problem.  Thread-safe.
class PointSolver {
 public:
  explicit PointSolver(const ProblemSpec& spec, EntropyOptions entropy = {}, BvpOptions bvp = {});

  SolutionSample solve(double x, double t) const;

  /// Row-major over t then x; identical output for any worker count.
  std::vector<SolutionSample> grid(std::span<const double> xs, std::span<const double> ts,
                                   std::size_t workers) const;

  const ProblemSpec& spec() const noexcept { return spec_; }

 private:
  const ProblemSpec& spec_;
  std::optional<EntropySolver> entropy_;
  BvpOptions bvp_;
};

struct ErrorReport {
  double max_abs = 0.0;
  /// Mean absolute error over the included points.
  double l1 = 0.0;
  std::size_t points = 0;
  std::size_t excluded_points = 0;
  double seconds = 0.0;
};

/// Method-of-characteristics reference: roots of g(x - F'(p) t) = p by dense
/// sampling plus bisection, feet pinned at jumps of g by bisection on F',
/// selection by minimal cost.
double characteristic_reference(const ConvexFlux& flux, const InitialData& init, double x, double t,
                                std::size_t samples = 4000);

/// Compares a pointwise solver against spec.analytic (or spec.reference) on the tensor grid,
/// skipping points within shock_exclusion_radius of spec.shock_loci.
ErrorReport analytic_error(const ProblemSpec& spec,
                           const std::function<double(double, double)>& solver,
                           std::span<const double> xs, std::span<const double> ts,
                           double shock_exclusion_radius = 1e-9, std::size_t workers = 1);

/// n points uniformly spaced on [lo, hi], endpoints included (n = 1 gives lo).
std::vector<double> linspace(double lo, double hi, std::size_t n);

// JSON document:
// {
//   "name": "...",
//   "flux": {"kind": "quadratic", "a": 1, "b": 0, "p_domain": [-10, 10]},
//   "init": {"breakpoints": [b0, ..., bn],
//            "pieces": [{"const": c} | {"poly": [c0, c1, ...]} | {"chebyshev": [...]}]},
//   "domain": {"x": [lo, hi], "t": [lo, hi]},
//   "transform": "none" | "negate",
//   "notes": "..."
// }
// "poly" coefficients are monomial in x; "chebyshev" ones are on the piece
// mapped to [-1, 1].  tabulated fluxes use "nodes", "slopes", "F0".

/// Throws ConfigError on malformed documents.
ProblemSpec problem_from_json(const std::string& text);
ProblemSpec load_problem_file(const std::string& path);

/// Throws ConfigError for problems without a flux family.
std::string problem_to_json(const ProblemSpec& spec);

}  // namespace ccl
