#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ccl/piecewise.hpp"

namespace ccl {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  double center() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  /// Same center, width multiplied by factor.
  Interval scaled(double factor) const noexcept {
    const double half = 0.5 * width() * factor;
    return {center() - half, center() + half};
  }
};

/// Space-independent convex flux F with derivative F' and the costate
/// interval on which it is used.  F' may be non-smooth at smoothness_hints.
struct ConvexFlux {
  std::function<double(double)> F;
  std::function<double(double)> Fprime;
  Interval p_domain{-1.0, 1.0};
  std::vector<double> smoothness_hints;
  std::string label;
};

struct TransformResult {
  double value = 0.0;
  double argmax = 0.0;
  /// The maximizer sits on the search boundary; the true sup may be larger.
  bool at_boundary = false;
};

/// sup_p { p q - F(p) } over search, via piecewise approximation of the
/// objective and its global maximum.
TransformResult legendre_transform(const std::function<double(double)>& F, double q,
                                   Interval search, std::span<const double> hints = {},
                                   const ApproxOptions& options = {1e-12});

/// F*(q) for a ConvexFlux.  Starts from p_domain widened by 50% and doubles
/// the window (up to three times) while the maximizer sits on its edge.
TransformResult conjugate(const ConvexFlux& flux, double q, const ApproxOptions& options = {1e-12});

/// L(alpha) = (F o (-1))*(alpha), the Lagrangian of the associated control problem.
TransformResult lagrangian(const ConvexFlux& flux, double alpha,
                           const ApproxOptions& options = {1e-12});

/// L(-F'(p)) through the closed-form identity p F'(p) - F(p).
double lagrangian_along_optimal(const ConvexFlux& flux, double p);

/// p -> F(-p) with the reflected domain and hints.
ConvexFlux reflected(const ConvexFlux& flux);

struct DualityReport {
  double max_deviation = 0.0;
  double worst_p = 0.0;
  std::size_t samples = 0;
};

/// max |F(p) - (F*)*(p)| over samples interior points of p_domain.
/// F* is tabulated once as a piecewise function on F'(p_domain) and then
/// transformed again.
DualityReport check_duality(const ConvexFlux& flux, std::size_t samples);

/// Sampled checks of the ConvexFlux contract (convexity, monotone F',
/// F' consistent with F).  Returns an empty string when all hold.
std::string validate_flux(const ConvexFlux& flux, std::size_t samples = 200);

}  // namespace ccl
