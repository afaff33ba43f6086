#include "ccl/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccl/errors.hpp"
#include "ccl/parallel.hpp"

namespace ccl {

InitialData InitialData::from_g(PiecewiseFunction g, double jump_threshold) {
  InitialData init;
  init.G = antiderivative(g);
  const double thr = jump_threshold < 0.0 ? default_jump_threshold(g) : jump_threshold;
  init.discontinuities = jumps(g, thr);
  init.g = std::move(g);
  return init;
}

double InitialData::g_at(double y) const {
  if (y <= g.lo()) return g.left_value(0);
  if (y >= g.hi()) return g.right_value(g.num_pieces() - 1);
  return g(y);
}

double InitialData::G_at(double y) const {
  if (y < g.lo()) return G.left_value(0) + g.left_value(0) * (y - g.lo());
  if (y > g.hi()) {
    const std::size_t last = G.num_pieces() - 1;
    return G.right_value(last) + g.right_value(g.num_pieces() - 1) * (y - g.hi());
  }
  return G(y);
}

Range InitialData::g_range() const { return range(g); }

EntropySolver::EntropySolver(ConvexFlux flux, InitialData init, EntropyOptions options)
    : flux_(std::move(flux)), init_(std::move(init)), options_(options) {
  if (init_.g.empty()) throw ConfigError("EntropySolver: empty initial data");
  g_range_ = init_.g_range();
  q_search_ = {std::min(flux_.p_domain.lo, g_range_.min), std::max(flux_.p_domain.hi, g_range_.max)};
  if (!(q_search_.width() > 0.0)) q_search_ = {q_search_.lo - 1.0, q_search_.hi + 1.0};
  std::vector<double> hints;
  for (double h : flux_.smoothness_hints)
    if (q_search_.contains(h)) hints.push_back(h);
  fprime_ = approximate(flux_.Fprime, q_search_.lo, q_search_.hi, hints, options_.approx);
}

std::vector<double> EntropySolver::candidate_costates(double x, double t) const {
  if (!(t > 0.0)) throw ConfigError("candidate_costates: requires t > 0");

  // Jump-point equations a_k - x + t F'(p) = 0.
  std::vector<double> q;
  for (double a : init_.discontinuities) {
    const auto r = roots(fprime_.affine(t, a - x), options_.roots);
    q.insert(q.end(), r.begin(), r.end());
  }

  // Search interval for p = g(x - F'(p) t): range(g) stretched over q.
  double lo = g_range_.min;
  double hi = g_range_.max;
  for (double p : q) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (!(hi - lo > 1e-12 * (1.0 + std::abs(lo)))) {
    lo -= 0.5;
    hi += 0.5;
  }
  // h > 0 below min g and h < 0 above max g, so padding adds no roots but
  // keeps roots at the extremes of g off the interval ends.
  const double pad = 1e-3 * (hi - lo);
  lo -= pad;
  hi += pad;

  // The composite is non-smooth wherever the foot crosses a breakpoint of g
  // and wherever F' is non-smooth.
  std::vector<double> hints(q.begin(), q.end());
  for (double b : init_.g.breakpoints()) {
    const auto r = roots(fprime_.affine(t, b - x), options_.roots);
    hints.insert(hints.end(), r.begin(), r.end());
  }
  hints.insert(hints.end(), flux_.smoothness_hints.begin(), flux_.smoothness_hints.end());
  std::erase_if(hints, [&](double h) { return !(h > lo && h < hi); });

  auto h = [&](double p) { return init_.g_at(x - t * flux_.Fprime(p)) - p; };
  const auto hpf = approximate(h, lo, hi, hints, options_.approx);
  auto candidates = roots(hpf, options_.roots);
  candidates.insert(candidates.end(), q.begin(), q.end());
  std::sort(candidates.begin(), candidates.end());

  std::vector<double> unique;
  for (double p : candidates)
    if (unique.empty() || p - unique.back() > options_.roots.root_tol) unique.push_back(p);
  if (unique.empty()) {
    std::ostringstream msg;
    msg << "no characteristic reaches (x, t) = (" << x << ", " << t << ")";
    throw SolverError(msg.str());
  }
  return unique;
}

double EntropySolver::cost(double p, double x, double t) const {
  const double slope = flux_.Fprime(p);
  return (p * slope - flux_.F(p)) * t + init_.G_at(x - slope * t);
}

SolutionSample EntropySolver::solve_point(double x, double t) const {
  if (t < 0.0 || !std::isfinite(t) || !std::isfinite(x))
    throw ConfigError("solve_point: need finite x and t >= 0");
  if (t == 0.0) return {x, t, init_.g_at(x), init_.G_at(x), 1};

  const auto candidates = candidate_costates(x, t);
  std::vector<double> costs(candidates.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    costs[i] = cost(candidates[i], x, t);
    best = std::min(best, costs[i]);
  }
  // Candidates are sorted, so the first one inside the tie band has the
  // smallest costate.
  const double band = options_.tie_tol * (1.0 + std::abs(best));
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (costs[i] <= best + band) return {x, t, candidates[i], costs[i], candidates.size()};
  throw SolverError("solve_point: non-finite costs");
}

std::vector<SolutionSample> EntropySolver::solve_grid(std::span<const double> xs,
                                                      std::span<const double> ts, bool parallel,
                                                      std::size_t workers) const {
  std::vector<SolutionSample> out(xs.size() * ts.size());
  const std::size_t nx = xs.size();
  const std::size_t w = parallel ? (workers == 0 ? default_workers() : workers) : 1;
  parallel_for(out.size(), w, [&](std::size_t k) { out[k] = solve_point(xs[k % nx], ts[k / nx]); });
  return out;
}

std::vector<double> candidate_costates(const ConvexFlux& flux, const InitialData& init, double x,
                                       double t) {
  return EntropySolver(flux, init).candidate_costates(x, t);
}

double cost(const ConvexFlux& flux, const InitialData& init, double p, double x, double t) {
  const double slope = flux.Fprime(p);
  return (p * slope - flux.F(p)) * t + init.G_at(x - slope * t);
}

SolutionSample solve_point(const ConvexFlux& flux, const InitialData& init, double x, double t) {
  return EntropySolver(flux, init).solve_point(x, t);
}

std::vector<SolutionSample> solve_grid(const ConvexFlux& flux, const InitialData& init,
                                       std::span<const double> xs, std::span<const double> ts,
                                       bool parallel) {
  return EntropySolver(flux, init).solve_grid(xs, ts, parallel);
}

HopfLaxResult hopf_lax_oracle(const ConvexFlux& flux, const InitialData& init, double x, double t,
                              std::size_t density) {
  if (!(t > 0.0) || density < 2) throw ConfigError("hopf_lax_oracle: need t > 0 and density >= 2");
  const Range gr = init.g_range();
  const double s_min = flux.Fprime(gr.min);
  const double s_max = flux.Fprime(gr.max);
  const double span = std::max(t * (s_max - s_min), 1e-3 * (1.0 + t));
  const double y_lo = x - t * s_max - 0.1 * span;
  const double y_hi = x - t * s_min + 0.1 * span;

  // Tabulate L over the slopes (y - x)/t the grid can produce.
  const double a_lo = (y_lo - x) / t;
  const double a_hi = (y_hi - x) / t;
  std::vector<double> alpha_hints;
  for (double h : flux.smoothness_hints) {
    const double a = -flux.Fprime(h);
    if (a > a_lo && a < a_hi) alpha_hints.push_back(a);
  }
  const auto lag = approximate([&](double a) { return lagrangian(flux, a).value; }, a_lo, a_hi,
                               alpha_hints, {1e-12});

  HopfLaxResult best{std::numeric_limits<double>::infinity(), y_lo, 0.0};
  const double dy = (y_hi - y_lo) / static_cast<double>(density - 1);
  for (std::size_t j = 0; j < density; ++j) {
    const double y = y_lo + dy * static_cast<double>(j);
    const double alpha = std::clamp((y - x) / t, a_lo, a_hi);
    const double v = t * lag.evaluate_piece(lag.find_piece(alpha), alpha) + init.G_at(y);
    if (v < best.w) {
      best.w = v;
      best.argmin_y = y;
    }
  }

  // Invert F' on the slope (x - y*)/t by bisection.
  const double slope = (x - best.argmin_y) / t;
  Interval bracket{std::min(flux.p_domain.lo, gr.min), std::max(flux.p_domain.hi, gr.max)};
  bracket = bracket.scaled(1.5);
  double a = bracket.lo;
  double b = bracket.hi;
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    if (flux.Fprime(m) < slope)
      a = m;
    else
      b = m;
  }
  best.u = 0.5 * (a + b);
  return best;
}

}  // namespace ccl
