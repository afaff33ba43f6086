#include "ccl/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ccl/errors.hpp"

namespace ccl {

TransformResult legendre_transform(const std::function<double(double)>& F, double q,
                                   Interval search, std::span<const double> hints,
                                   const ApproxOptions& options) {
  if (!(search.lo < search.hi)) throw ConfigError("legendre_transform: empty search interval");
  auto objective = [&](double p) { return p * q - F(p); };
  const auto pf = approximate(objective, search.lo, search.hi, hints, options);
  const auto e = extrema(pf);
  const double edge_tol = 1e-9 * search.width();
  TransformResult out;
  out.argmax = e.argmax;
  // Re-evaluate at the maximizer so the value carries F's own accuracy.
  out.value = std::max(e.max, objective(std::clamp(e.argmax, search.lo, search.hi)));
  out.at_boundary = e.argmax <= search.lo + edge_tol || e.argmax >= search.hi - edge_tol;
  return out;
}

TransformResult conjugate(const ConvexFlux& flux, double q, const ApproxOptions& options) {
  Interval search = flux.p_domain.scaled(1.5);
  TransformResult result;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    std::vector<double> hints;
    for (double h : flux.smoothness_hints)
      if (h > search.lo && h < search.hi) hints.push_back(h);
    result = legendre_transform(flux.F, q, search, hints, options);
    if (!result.at_boundary) break;
    search = search.scaled(2.0);
  }
  return result;
}

ConvexFlux reflected(const ConvexFlux& flux) {
  ConvexFlux out;
  out.F = [F = flux.F](double p) { return F(-p); };
  out.Fprime = [Fp = flux.Fprime](double p) { return -Fp(-p); };
  out.p_domain = {-flux.p_domain.hi, -flux.p_domain.lo};
  for (double h : flux.smoothness_hints) out.smoothness_hints.push_back(-h);
  std::sort(out.smoothness_hints.begin(), out.smoothness_hints.end());
  out.label = flux.label.empty() ? std::string{} : flux.label + "(-p)";
  return out;
}

TransformResult lagrangian(const ConvexFlux& flux, double alpha, const ApproxOptions& options) {
  return conjugate(reflected(flux), alpha, options);
}

double lagrangian_along_optimal(const ConvexFlux& flux, double p) {
  return p * flux.Fprime(p) - flux.F(p);
}

DualityReport check_duality(const ConvexFlux& flux, std::size_t samples) {
  DualityReport report;
  if (samples == 0) return report;
  const Interval& dom = flux.p_domain;
  // Slopes reachable from p_domain, slightly widened so interior samples
  // have interior maximizers.
  const double s_lo = flux.Fprime(dom.lo);
  const double s_hi = flux.Fprime(dom.hi);
  const double pad = 0.05 * std::max(s_hi - s_lo, 1e-3);
  const Interval q_dom{s_lo - pad, s_hi + pad};

  // F* loses smoothness at slopes where F' is kinked or flat to high order;
  // the images of the declared hints and of the minimizer of F cover the
  // catalog fluxes.
  std::vector<double> q_hints;
  auto add_hint = [&](double q) {
    if (q > q_dom.lo && q < q_dom.hi) q_hints.push_back(q);
  };
  for (double h : flux.smoothness_hints) {
    add_hint(flux.Fprime(h));
  }
  {
    const auto fpf = approximate(flux.F, dom.lo, dom.hi, flux.smoothness_hints, {1e-12});
    add_hint(flux.Fprime(extrema(fpf).argmin));
  }
  std::sort(q_hints.begin(), q_hints.end());

  const ApproxOptions inner{1e-12};
  const auto fstar = approximate([&](double q) { return conjugate(flux, q, inner).value; },
                                 q_dom.lo, q_dom.hi, q_hints, {1e-11});
  std::function<double(double)> fstar_fn = [&fstar](double q) { return fstar(q); };

  report.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) * std::numbers::pi / static_cast<double>(samples);
    const double p = dom.center() - 0.5 * dom.width() * 0.98 * std::cos(theta);
    const auto dd = legendre_transform(fstar_fn, p, q_dom, fstar.breakpoints(), inner);
    const double dev = std::abs(flux.F(p) - dd.value);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_p = p;
    }
  }
  return report;
}

std::string validate_flux(const ConvexFlux& flux, std::size_t samples) {
  std::ostringstream problems;
  const Interval& d = flux.p_domain;
  const double h = 1e-5 * std::max(1.0, d.width());
  for (std::size_t i = 1; i < samples; ++i) {
    const double a = d.lo + d.width() * static_cast<double>(i - 1) / static_cast<double>(samples);
    const double b = d.lo + d.width() * static_cast<double>(i + 1) / static_cast<double>(samples);
    const double m = 0.5 * (a + b);
    const double scale = 1.0 + std::abs(flux.F(a)) + std::abs(flux.F(b));
    if (flux.F(m) > 0.5 * (flux.F(a) + flux.F(b)) + 1e-10 * scale) {
      problems << "F not convex near p = " << m << "; ";
      break;
    }
    if (flux.Fprime(b) < flux.Fprime(a) - 1e-12 * (1.0 + std::abs(flux.Fprime(a)))) {
      problems << "F' decreasing near p = " << m << "; ";
      break;
    }
    const bool near_hint = std::any_of(flux.smoothness_hints.begin(), flux.smoothness_hints.end(),
                                       [&](double s) { return std::abs(s - m) < 2.0 * h; });
    if (!near_hint) {
      const double fd = (flux.F(m + h) - flux.F(m - h)) / (2.0 * h);
      if (std::abs(fd - flux.Fprime(m)) > 1e-6 * (1.0 + std::abs(flux.Fprime(m)))) {
        problems << "F' inconsistent with F near p = " << m << "; ";
        break;
      }
    }
  }
  return problems.str();
}

}  // namespace ccl
