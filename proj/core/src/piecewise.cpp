#include "ccl/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "ccl/chebyshev.hpp"
#include "ccl/errors.hpp"

namespace ccl {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double to_reference(double a, double b, double x) { return (2.0 * x - (a + b)) / (b - a); }

struct PieceFit {
  std::vector<double> coeffs;
  double residual = 0.0;  // relative size of the tail
  bool resolved = false;
};

// Tolerances are relative to max(local magnitude, global_scale), so pieces
// where f is tiny compared with the rest of the domain are not chased into
// rounding noise.
PieceFit fit_piece(const std::function<double(double)>& f, double a, double b,
                   const ApproxOptions& options, double global_scale) {
  PieceFit best;
  best.residual = std::numeric_limits<double>::infinity();
  const std::size_t start = std::max<std::size_t>(options.min_degree, 2);
  for (std::size_t n = start;; n *= 2) {
    n = std::min(n, std::max(options.max_degree, start));
    const auto nodes = cheb::first_kind_points(n);
    std::vector<double> values(n);
    double vscale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f(0.5 * (a + b) + 0.5 * (b - a) * nodes[j]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "approximate: non-finite sample at x = " << 0.5 * (a + b) + 0.5 * (b - a) * nodes[j];
        throw ApproximationError(msg.str(), std::numeric_limits<double>::infinity());
      }
      values[j] = v;
      vscale = std::max(vscale, std::abs(v));
    }
    if (vscale == 0.0) return {{0.0}, 0.0, true};
    vscale = std::max(vscale, global_scale);

    auto c = cheb::coeffs_from_first_kind(values);
    const std::size_t tail = std::max<std::size_t>(4, n / 8);
    double tail_max = 0.0;
    for (std::size_t k = n - std::min(tail, n); k < n; ++k) tail_max = std::max(tail_max, std::abs(c[k]));
    const double residual = tail_max / vscale;
    if (residual <= options.rel_tol) {
      // Drop the resolved noise floor.
      const double floor = 1e-2 * options.rel_tol * vscale;
      while (c.size() > 1 && std::abs(c.back()) <= floor) c.pop_back();
      return {std::move(c), residual, true};
    }
    if (residual < best.residual) best = {std::move(c), residual, false};
    if (n >= options.max_degree) return best;
  }
}

struct Builder {
  const std::function<double(double)>& f;
  const ApproxOptions& options;
  std::size_t budget;  // remaining pieces allowed beyond the mandatory ones
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> coeffs;
  double worst = 0.0;
  double scale = 0.0;

  void build(double a, double b) {
    auto fit = fit_piece(f, a, b, options, scale);
    if (fit.resolved) {
      coeffs.push_back(std::move(fit.coeffs));
      breakpoints.push_back(b);
      return;
    }
    const double mid = 0.5 * (a + b);
    if (budget == 0 || !(mid > a && mid < b)) {
      std::ostringstream msg;
      msg << "approximate: could not resolve function on [" << a << ", " << b
          << "] within " << options.max_pieces << " pieces (tail " << fit.residual << ")";
      throw ApproximationError(msg.str(), std::max(worst, fit.residual));
    }
    worst = std::max(worst, fit.residual);
    --budget;
    build(a, mid);
    build(mid, b);
  }
};

}  // namespace

PiecewiseFunction::PiecewiseFunction(std::vector<double> breakpoints,
                                     std::vector<std::vector<double>> coeffs)
    : breakpoints_(std::move(breakpoints)), coeffs_(std::move(coeffs)) {
  if (breakpoints_.size() < 2 || coeffs_.size() + 1 != breakpoints_.size())
    throw ConfigError("PiecewiseFunction: need k+1 breakpoints for k pieces");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] < breakpoints_[i + 1]))
      throw ConfigError("PiecewiseFunction: breakpoints must be strictly increasing");
  for (const auto& c : coeffs_)
    if (c.empty()) throw ConfigError("PiecewiseFunction: empty piece");
}

PiecewiseFunction PiecewiseFunction::constants(std::vector<double> breakpoints,
                                               std::span<const double> values) {
  std::vector<std::vector<double>> coeffs;
  for (double v : values) coeffs.push_back({v});
  return PiecewiseFunction(std::move(breakpoints), std::move(coeffs));
}

std::size_t PiecewiseFunction::max_degree() const noexcept {
  std::size_t d = 0;
  for (const auto& c : coeffs_) d = std::max(d, c.size() - 1);
  return d;
}

std::size_t PiecewiseFunction::find_piece(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return std::min(idx, coeffs_.size() - 1);
}

double PiecewiseFunction::operator()(double x) const {
  if (empty() || !(x >= lo() && x <= hi())) {
    std::ostringstream msg;
    msg << "evaluate: x = " << x << " outside [" << (empty() ? 0.0 : lo()) << ", "
        << (empty() ? 0.0 : hi()) << "]";
    throw DomainError(msg.str());
  }
  return evaluate_piece(find_piece(x), x);
}

double PiecewiseFunction::evaluate_piece(std::size_t piece, double x) const {
  const double a = breakpoints_[piece];
  const double b = breakpoints_[piece + 1];
  return cheb::evaluate(coeffs_[piece], to_reference(a, b, x));
}

double PiecewiseFunction::left_value(std::size_t piece) const {
  return cheb::value_at_left(coeffs_.at(piece));
}

double PiecewiseFunction::right_value(std::size_t piece) const {
  return cheb::value_at_right(coeffs_.at(piece));
}

double PiecewiseFunction::vscale(std::size_t piece) const {
  double s = 0.0;
  for (double v : coeffs_.at(piece)) s += std::abs(v);
  return s;
}

double PiecewiseFunction::vscale() const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) s = std::max(s, vscale(i));
  return s;
}

PiecewiseFunction PiecewiseFunction::affine(double scale, double shift) const {
  auto coeffs = coeffs_;
  for (auto& c : coeffs) {
    for (double& v : c) v *= scale;
    c[0] += shift;
  }
  return PiecewiseFunction(breakpoints_, std::move(coeffs));
}

PiecewiseFunction approximate(const std::function<double(double)>& f, double lo, double hi,
                              std::span<const double> hints, const ApproxOptions& options) {
  if (!(lo < hi)) throw ConfigError("approximate: need lo < hi");
  std::vector<double> edges{lo};
  std::vector<double> sorted(hints.begin(), hints.end());
  std::sort(sorted.begin(), sorted.end());
  for (double h : sorted) {
    // Hints closer than a few ulps to an existing edge would create a
    // degenerate piece.
    const double guard = 8.0 * kEps * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (h > edges.back() + guard && h < hi - guard) edges.push_back(h);
  }
  edges.push_back(hi);

  const std::size_t mandatory = edges.size() - 1;
  if (mandatory > options.max_pieces)
    throw ApproximationError("approximate: more hints than max_pieces", 0.0);
  Builder builder{f, options, options.max_pieces - mandatory, {lo}, {}, 0.0, 0.0};
  const auto probe = cheb::first_kind_points(17);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    for (double s : probe) {
      const double v = f(0.5 * (edges[i] + edges[i + 1]) + 0.5 * (edges[i + 1] - edges[i]) * s);
      if (std::isfinite(v)) builder.scale = std::max(builder.scale, std::abs(v));
    }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) builder.build(edges[i], edges[i + 1]);
  return PiecewiseFunction(std::move(builder.breakpoints), std::move(builder.coeffs));
}

double evaluate(const PiecewiseFunction& pf, double x) { return pf(x); }

std::vector<double> roots(const PiecewiseFunction& pf, const RootOptions& options) {
  std::vector<double> all;
  const auto& bp = pf.breakpoints();
  for (std::size_t i = 0; i < pf.num_pieces(); ++i) {
    const double a = bp[i];
    const double b = bp[i + 1];
    const auto& c = pf.coeffs(i);
    if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; })) {
      all.insert(all.end(), {a, 0.5 * (a + b), b});
      continue;
    }
    // imag_tol is relative to the physical width; the reference interval has width 2.
    for (double s : cheb::real_roots(c, 2.0 * options.imag_tol))
      all.push_back(std::clamp(0.5 * (a + b) + 0.5 * (b - a) * s, a, b));
  }
  std::sort(all.begin(), all.end());
  std::vector<double> merged;
  for (double r : all)
    if (merged.empty() || r - merged.back() > options.root_tol) merged.push_back(r);
  return merged;
}

PiecewiseFunction antiderivative(const PiecewiseFunction& pf) {
  std::vector<std::vector<double>> out;
  out.reserve(pf.num_pieces());
  double offset = 0.0;
  const auto& bp = pf.breakpoints();
  for (std::size_t i = 0; i < pf.num_pieces(); ++i) {
    auto b = cheb::integrate(pf.coeffs(i));
    const double half_width = 0.5 * (bp[i + 1] - bp[i]);
    for (double& v : b) v *= half_width;
    b[0] += offset;
    offset = cheb::value_at_right(b);
    out.push_back(std::move(b));
  }
  return PiecewiseFunction(bp, std::move(out));
}

PiecewiseFunction derivative(const PiecewiseFunction& pf) {
  std::vector<std::vector<double>> out;
  out.reserve(pf.num_pieces());
  const auto& bp = pf.breakpoints();
  for (std::size_t i = 0; i < pf.num_pieces(); ++i) {
    auto d = cheb::differentiate(pf.coeffs(i));
    const double scale = 2.0 / (bp[i + 1] - bp[i]);
    for (double& v : d) v *= scale;
    out.push_back(std::move(d));
  }
  return PiecewiseFunction(bp, std::move(out));
}

Extrema extrema(const PiecewiseFunction& pf) {
  Extrema e{0.0, std::numeric_limits<double>::infinity(), 0.0,
            -std::numeric_limits<double>::infinity()};
  auto consider = [&](double x, double v) {
    if (v < e.min) {
      e.min = v;
      e.argmin = x;
    }
    if (v > e.max) {
      e.max = v;
      e.argmax = x;
    }
  };
  const auto& bp = pf.breakpoints();
  for (std::size_t i = 0; i < pf.num_pieces(); ++i) {
    const double a = bp[i];
    const double b = bp[i + 1];
    consider(a, pf.left_value(i));
    consider(b, pf.right_value(i));
    const auto& c = pf.coeffs(i);
    if (c.size() < 3) continue;
    const auto dc = cheb::differentiate(c);
    for (double s : cheb::real_roots(dc, 1e-8))
      consider(0.5 * (a + b) + 0.5 * (b - a) * s, cheb::evaluate(c, s));
  }
  return e;
}

Range range(const PiecewiseFunction& pf) {
  const auto e = extrema(pf);
  return {e.min, e.max};
}

std::vector<double> jumps(const PiecewiseFunction& pf, double threshold) {
  std::vector<double> out;
  const auto& bp = pf.breakpoints();
  for (std::size_t i = 1; i < pf.num_pieces(); ++i)
    if (std::abs(pf.left_value(i) - pf.right_value(i - 1)) > threshold) out.push_back(bp[i]);
  return out;
}

double default_jump_threshold(const PiecewiseFunction& pf) { return 10.0 * pf.vscale() * kEps; }

}  // namespace ccl
