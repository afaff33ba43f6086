#include "ccl/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "ccl/errors.hpp"
#include "ccl/parallel.hpp"

namespace ccl {
namespace {

using std::numbers::pi;

ConvexFlux tabulated_flux(const FluxFamily& fam) {
  const auto& p = fam.nodes;
  const auto& s = fam.slopes;
  if (p.size() < 2 || p.size() != s.size())
    throw ConfigError("tabulated flux: need at least two (node, slope) pairs");
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(p[i] > p[i - 1])) throw ConfigError("tabulated flux: nodes must increase");
    if (s[i] < s[i - 1]) throw ConfigError("tabulated flux: slopes must be non-decreasing");
  }
  // F at every node by the trapezoid rule (exact for piecewise-linear F').
  std::vector<double> Fn(p.size(), fam.F0);
  for (std::size_t i = 1; i < p.size(); ++i) Fn[i] = Fn[i - 1] + 0.5 * (s[i] + s[i - 1]) * (p[i] - p[i - 1]);

  auto segment = [p](double x) {
    const auto it = std::upper_bound(p.begin(), p.end(), x);
    const auto k = static_cast<std::size_t>(std::distance(p.begin(), it));
    return std::clamp<std::size_t>(k, 1, p.size() - 1) - 1;
  };
  ConvexFlux f;
  f.Fprime = [p, s, segment](double x) {
    const std::size_t k = segment(x);
    const double m = (s[k + 1] - s[k]) / (p[k + 1] - p[k]);
    return s[k] + m * (x - p[k]);
  };
  f.F = [p, s, Fn, segment](double x) {
    const std::size_t k = segment(x);
    const double m = (s[k + 1] - s[k]) / (p[k + 1] - p[k]);
    const double d = x - p[k];
    return Fn[k] + s[k] * d + 0.5 * m * d * d;
  };
  f.smoothness_hints = p;
  return f;
}

PiecewiseFunction box(double lo, double a, double b, double hi) {
  const std::vector<double> values{0.0, 1.0, 0.0};
  return PiecewiseFunction::constants({lo, a, b, hi}, values);
}

double burgers_box_exact(double x, double t) {
  if (x < 0.0) return 0.0;
  if (t <= 2.0) {
    if (x < t) return x / t;
    if (x < 1.0 + 0.5 * t) return 1.0;
    return 0.0;
  }
  return x < std::sqrt(2.0 * t) ? x / t : 0.0;
}

ProblemSpec burgers_spec(std::string name, PiecewiseFunction g, Interval dx, Interval dt,
                         std::string notes) {
  FluxFamily fam;
  ProblemSpec spec;
  spec.name = std::move(name);
  spec.flux = make_flux(fam);
  spec.family = fam;
  spec.init = InitialData::from_g(std::move(g));
  spec.domain_x = dx;
  spec.domain_t = dt;
  spec.notes = std::move(notes);
  return spec;
}

ProblemSpec make_burgers_box() {
  auto spec = burgers_spec("burgers_box", box(-1.0, 0.0, 1.0, 3.0), {-1.0, 3.0}, {0.1, 4.0},
                           "Burgers, u0 = 1 on [0, 1]; rarefaction plus shock at 1 + t/2, "
                           "then sqrt(2t) after t = 2");
  spec.analytic = burgers_box_exact;
  spec.shock_loci = [](double t) {
    return std::vector<double>{t <= 2.0 ? 1.0 + 0.5 * t : std::sqrt(2.0 * t)};
  };
  return spec;
}

ProblemSpec make_burgers_sine() {
  auto g = approximate([](double x) { return 1.0 + std::sin(pi * x); }, -6.0, 10.0);
  auto spec = burgers_spec("burgers_sine", std::move(g), {0.0, 4.0}, {0.1, 0.8},
                      "Burgers, u0 = 1 + sin(pi x); shocks form at t = 1/pi");
  spec.reference = [flux = std::get<ConvexFlux>(spec.flux), init = spec.init](double x, double t) {
    return characteristic_reference(flux, init, x, t);
  };
  return spec;
}

double nwave_g(double x) {
  if (x < -pi || x > pi) return 0.0;
  return (std::cos(x) + 1.0) * (2.0 * std::sin(3.0 * x) + std::cos(2.0 * x) + 0.2);
}

ProblemSpec make_burgers_nwave() {
  const std::vector<double> hints{-pi, pi};
  auto g = approximate(nwave_g, -8.0, 8.0, hints);
  return burgers_spec("burgers_nwave", std::move(g), {-8.0, 8.0}, {0.05, 1.0},
                      "Burgers, compactly supported u0 on [-pi, pi], zero outside; N-wave decay");
}

double wiggly_g(double x) {
  if (x < 0.0 || x > 14.0) return 0.0;
  const double s = std::sin(x);
  return s * s + std::sin(x * x);
}

ProblemSpec make_burgers_wiggly() {
  const std::vector<double> hints{0.0, 14.0};
  auto g = approximate(wiggly_g, -2.0, 16.0, hints);
  return burgers_spec("burgers_wiggly", std::move(g), {-2.0, 16.0}, {0.05, 1.5},
                      "Burgers, u0 = sin(x)^2 + sin(x^2) on [0, 14], zero outside; many shocks");
}

ProblemSpec make_lwr() {
  FluxFamily fam;
  fam.kind = "lwr";
  fam.vmax = 1.0;
  fam.p_domain = {-2.0, 1.0};
  ProblemSpec spec;
  spec.name = "lwr_traffic";
  spec.flux = make_flux(fam);
  spec.family = fam;
  auto g = approximate(
      [](double x) {
        const double d = x - 1.0 / 3.0;
        return -(0.2 + 0.8 * std::exp(-d * d / 20.0));
      },
      -30.0, 30.0);
  spec.init = InitialData::from_g(std::move(g));
  spec.domain_x = {-30.0, 30.0};
  spec.domain_t = {0.1, 4.0};
  spec.transform = OutputTransform::kNegate;
  spec.notes =
      "LWR traffic, vmax = 1, stored as u = -q with F(u) = u (1 + u); reported density q = -u";
  return spec;
}

ProblemSpec make_lqr() {
  ControlProblem prob;
  prob.lagrangian = [](double x, double a) { return 0.5 * (x * x + a * a); };
  prob.hamiltonian = [](double x, double p, double a) { return p * a + 0.5 * (x * x + a * a); };
  prob.dH_dx = [](double x, double, double) { return x; };
  prob.alpha_star = [](double, double p) { return -p; };
  prob.terminal = InitialData::from_g(box(-2.0, -1.0, 0.0, 1.0));
  prob.horizon_T = 2.0;
  prob.label = "(u^2 - x^2)/2";

  ProblemSpec spec;
  spec.name = "lqr_spacedependent";
  spec.init = prob.terminal;
  spec.domain_x = {-3.0, 3.0};
  spec.domain_t = {0.1, 2.0};
  spec.notes = "u_t + ((u^2 - x^2)/2)_x = 0, u0 = 1 on [-1, 0]; closed-form candidate terminal states";

  const InitialData terminal = prob.terminal;
  spec.analytic = [terminal](double x, double t) {
    if (t == 0.0) return terminal.g_at(x);
    std::vector<std::pair<double, double>> cost_u;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : lqr_candidates(x, t)) {
      if (!c.valid) continue;
      cost_u.emplace_back(lqr_cost(x, t, c.X, terminal), lqr_trajectory(x, t, c.X).p0);
      best = std::min(best, cost_u.back().first);
    }
    const double band = 1e-12 * (1.0 + std::abs(best));
    double best_u = std::numeric_limits<double>::infinity();
    for (const auto& [J, u] : cost_u)
      if (J <= best + band) best_u = std::min(best_u, u);
    return best_u;
  };
  spec.enumerator = [](double x, double t) {
    std::vector<BvpCandidate> out;
    for (const auto& c : lqr_candidates(x, t)) {
      if (!c.valid) continue;
      const auto tr = lqr_trajectory(x, t, c.X);
      BvpCandidate cand;
      const bool on_jump = c.X == 0.0 || c.X == -1.0;
      if (on_jump || c.branch == LqrBranch::kPinnedZero || c.branch == LqrBranch::kPinnedMinusOne)
        cand.terminal = PinnedTerminal{c.X};
      else
        cand.terminal = FreeTerminal{};
      const double C = tr.C;
      cand.guess.x = [x, C](double r) { return (x - C) * std::exp(-r) + C * std::exp(r); };
      cand.guess.p = [x, C](double r) { return (x - C) * std::exp(-r) - C * std::exp(r); };
      cand.tag = "X=" + std::to_string(c.X);
      out.push_back(std::move(cand));
    }
    return out;
  };
  spec.flux = std::move(prob);
  return spec;
}

ProblemSpec make_zhang() {
  ControlProblem prob;
  auto a = [](double x) { return std::exp(-10.0 * x); };
  prob.lagrangian = [a](double x, double al) { return 0.25 * a(x) * (al + 1.0) * (al + 1.0); };
  prob.hamiltonian = [a](double x, double p, double al) {
    return p * al + 0.25 * a(x) * (al + 1.0) * (al + 1.0);
  };
  prob.dH_dx = [a](double x, double, double al) { return -2.5 * a(x) * (al + 1.0) * (al + 1.0); };
  prob.alpha_star = [](double x, double p) { return -1.0 - 2.0 * p * std::exp(10.0 * x); };
  const std::vector<double> hints{-0.5, 0.0, 0.5, 1.0, 1.5};
  prob.terminal = InitialData::from_g(
      approximate([](double x) { return -std::exp(-10.0 * x) / 10.0; }, -1.0, 2.0, hints));
  prob.horizon_T = 0.6;
  prob.label = "(1 + u/a) u, a = exp(-10 x)";

  ProblemSpec spec;
  spec.name = "zhang_spacedependent";
  spec.init = prob.terminal;
  spec.domain_x = {0.0, 1.0};
  spec.domain_t = {0.1, 0.6};
  spec.notes = "u_t + ((1 + u/a) u)_x = 0, a = exp(-10x), u0 = -exp(-10x)/10; smooth for all t";
  spec.analytic = [](double x, double t) {
    return -std::exp(-10.0 * x) / (1.0 + 9.0 * std::exp(-10.0 * t));
  };
  // Unique solution: one free-end candidate seeded with the frozen initial state.
  spec.enumerator = [](double x, double) {
    BvpCandidate cand;
    cand.terminal = FreeTerminal{};
    const double p0 = -std::exp(-10.0 * x) / 10.0;
    cand.guess.x = [x](double) { return x; };
    cand.guess.p = [p0](double) { return p0; };
    cand.tag = "free";
    return std::vector<BvpCandidate>{cand};
  };
  spec.flux = std::move(prob);
  return spec;
}

}  // namespace

ConvexFlux make_flux(const FluxFamily& fam) {
  ConvexFlux f;
  if (fam.kind == "quadratic") {
    if (!(fam.a > 0.0)) throw ConfigError("quadratic flux: a must be positive");
    const double a = fam.a, b = fam.b;
    f.F = [a, b](double p) { return 0.5 * a * p * p + b * p; };
    f.Fprime = [a, b](double p) { return a * p + b; };
  } else if (fam.kind == "quartic") {
    if (!(fam.a > 0.0)) throw ConfigError("quartic flux: a must be positive");
    const double a = fam.a;
    f.F = [a](double p) { return 0.25 * a * p * p * p * p; };
    f.Fprime = [a](double p) { return a * p * p * p; };
  } else if (fam.kind == "lwr") {
    if (!(fam.vmax > 0.0)) throw ConfigError("lwr flux: vmax must be positive");
    const double v = fam.vmax;
    f.F = [v](double u) { return v * u * (1.0 + u); };
    f.Fprime = [v](double u) { return v * (1.0 + 2.0 * u); };
  } else if (fam.kind == "tabulated") {
    f = tabulated_flux(fam);
  } else {
    throw ConfigError("unknown flux kind '" + fam.kind + "'");
  }
  if (!(fam.p_domain.width() > 0.0)) throw ConfigError("flux p_domain must have lo < hi");
  f.p_domain = fam.p_domain;
  f.label = fam.kind;
  return f;
}

const std::vector<ProblemSpec>& catalog() {
  static const std::vector<ProblemSpec> specs = [] {
    std::vector<ProblemSpec> v;
    v.push_back(make_burgers_box());
    v.push_back(make_burgers_sine());
    v.push_back(make_burgers_nwave());
    v.push_back(make_burgers_wiggly());
    v.push_back(make_lwr());
    v.push_back(make_lqr());
    v.push_back(make_zhang());
    return v;
  }();
  return specs;
}

const ProblemSpec& find_problem(const std::string& name) {
  for (const auto& s : catalog())
    if (s.name == name) return s;
  throw ConfigError("unknown problem '" + name + "'");
}

PointSolver::PointSolver(const ProblemSpec& spec, EntropyOptions entropy, BvpOptions bvp)
    : spec_(spec), bvp_(std::move(bvp)) {
  if (const auto* f = std::get_if<ConvexFlux>(&spec.flux)) entropy_.emplace(*f, spec.init, entropy);
  else if (!spec.enumerator) throw ConfigError("control problem '" + spec.name + "' has no enumerator");
}

SolutionSample PointSolver::solve(double x, double t) const {
  if (entropy_) return entropy_->solve_point(x, t);
  return minimum_value_point(std::get<ControlProblem>(spec_.flux), spec_.enumerator, x, t, bvp_);
}

std::vector<SolutionSample> PointSolver::grid(std::span<const double> xs, std::span<const double> ts,
                                              std::size_t workers) const {
  std::vector<SolutionSample> out(xs.size() * ts.size());
  const std::size_t nx = xs.size();
  parallel_for(out.size(), workers, [&](std::size_t k) { out[k] = solve(xs[k % nx], ts[k / nx]); });
  return out;
}

ErrorReport analytic_error(const ProblemSpec& spec,
                           const std::function<double(double, double)>& solver,
                           std::span<const double> xs, std::span<const double> ts,
                           double shock_exclusion_radius, std::size_t workers) {
  const auto& exact = spec.analytic ? spec.analytic : spec.reference;
  if (!exact) throw ConfigError("problem '" + spec.name + "' has no analytic or reference solution");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t nx = xs.size();
  const std::size_t n = nx * ts.size();
  std::vector<double> err(n, 0.0);
  std::vector<char> skip(n, 0);
  parallel_for(n, workers, [&](std::size_t k) {
    const double x = xs[k % nx];
    const double t = ts[k / nx];
    if (spec.shock_loci) {
      for (double s : spec.shock_loci(t))
        if (std::abs(x - s) <= shock_exclusion_radius) skip[k] = 1;
    }
    if (!skip[k]) err[k] = std::abs(solver(x, t) - exact(x, t));
  });
  ErrorReport r;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (skip[k]) {
      ++r.excluded_points;
      continue;
    }
    ++r.points;
    sum += err[k];
    r.max_abs = std::max(r.max_abs, err[k]);
  }
  r.l1 = r.points ? sum / static_cast<double>(r.points) : 0.0;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double characteristic_reference(const ConvexFlux& flux, const InitialData& init, double x, double t,
                                std::size_t samples) {
  if (t == 0.0) return init.g_at(x);
  const Range gr = init.g_range();
  const double pad = 1e-9 * (1.0 + std::abs(gr.max - gr.min));
  const double lo = gr.min - pad;
  const double hi = gr.max + pad;
  auto h = [&](double p) { return init.g_at(x - t * flux.Fprime(p)) - p; };
  auto bisect = [](auto&& f, double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (!(m > a && m < b)) break;
      const double fm = f(m);
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };

  std::vector<double> cand;
  const std::size_t n = std::max<std::size_t>(samples, 2);
  double pa = lo, ha = h(lo);
  for (std::size_t i = 1; i < n; ++i) {
    const double pb = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double hb = h(pb);
    if (ha == 0.0) cand.push_back(pa);
    if ((ha < 0.0) != (hb < 0.0) && ha != 0.0 && hb != 0.0) {
      const double r = bisect(h, pa, pb, ha);
      // A sign change across a jump of g is not a root.
      if (std::abs(h(r)) <= 1e-8 * (1.0 + std::abs(r))) cand.push_back(r);
    }
    pa = pb;
    ha = hb;
  }
  if (ha == 0.0) cand.push_back(pa);

  const double qlo = std::min(flux.p_domain.lo, gr.min);
  const double qhi = std::max(flux.p_domain.hi, gr.max);
  for (double a : init.discontinuities) {
    auto foot = [&](double p) { return x - t * flux.Fprime(p) - a; };
    const double fl = foot(qlo);
    const double fh = foot(qhi);
    if (fl == 0.0) cand.push_back(qlo);
    else if (fh == 0.0) cand.push_back(qhi);
    else if ((fl < 0.0) != (fh < 0.0)) cand.push_back(bisect(foot, qlo, qhi, fl));
  }
  if (cand.empty()) throw SolverError("characteristic_reference: no characteristic found");

  auto cost = [&](double p) {
    const double s = flux.Fprime(p);
    return (p * s - flux.F(p)) * t + init.G_at(x - s * t);
  };
  double best = std::numeric_limits<double>::infinity();
  for (double p : cand) best = std::min(best, cost(p));
  const double band = 1e-12 * (1.0 + std::abs(best));
  double u = std::numeric_limits<double>::infinity();
  for (double p : cand)
    if (cost(p) <= best + band) u = std::min(u, p);
  return u;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n, lo);
  if (n < 2) return v;
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

}  // namespace ccl
