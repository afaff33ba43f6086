#include "ccl/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "ccl/errors.hpp"
#include "ccl/parallel.hpp"

namespace ccl {

std::vector<Jump> locate_jumps(const std::function<double(double)>& u, double lo, double hi,
                               const ReconstructOptions& options) {
  if (!(lo < hi) || options.scan_points < 3) throw ConfigError("locate_jumps: bad scan setup");
  const std::size_t n = options.scan_points;
  std::vector<double> xs(n);
  std::vector<double> us(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  parallel_for(n, options.workers, [&](std::size_t i) { us[i] = u(xs[i]); });

  std::vector<double> inc(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) inc[i] = std::abs(us[i + 1] - us[i]);

  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double left = i > 0 ? inc[i - 1] : 0.0;
    const double right = i + 2 < n ? inc[i + 1] : 0.0;
    if (inc[i] > options.min_jump && inc[i] > options.neighbour_ratio * std::max(left, right))
      flagged.push_back(i);
  }

  std::vector<Jump> found(flagged.size());
  std::vector<char> keep(flagged.size(), 0);
  parallel_for(flagged.size(), options.workers, [&](std::size_t k) {
    const std::size_t i = flagged[k];
    double a = xs[i], b = xs[i + 1];
    double ua = us[i], ub = us[i + 1];
    const double tol = options.locate_tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    while (b - a > tol) {
      const double m = 0.5 * (a + b);
      if (!(m > a && m < b)) break;
      const double um = u(m);
      if (std::abs(um - ua) <= std::abs(um - ub)) {
        a = m;
        ua = um;
      } else {
        b = m;
        ub = um;
      }
    }
    if (std::abs(ub - ua) > options.min_jump) {
      found[k] = {0.5 * (a + b), ua, ub};
      keep[k] = 1;
    }
  });

  std::vector<Jump> out;
  for (std::size_t k = 0; k < found.size(); ++k)
    if (keep[k]) out.push_back(found[k]);
  return out;
}

Reconstruction reconstruct(const std::function<double(double)>& u, double lo, double hi,
                           const ReconstructOptions& options) {
  Reconstruction rec;
  rec.jumps = locate_jumps(u, lo, hi, options);
  std::vector<double> hints;
  for (const auto& j : rec.jumps) hints.push_back(j.x);

  ApproxOptions approx = options.approx;
  for (;;) {
    try {
      rec.u = approximate(u, lo, hi, hints, approx);
      rec.rel_tol = approx.rel_tol;
      return rec;
    } catch (const ApproximationError&) {
      if (approx.rel_tol >= 1e-6) throw;
      approx.rel_tol = std::min(1e-6, approx.rel_tol * 100.0);
    }
  }
}

}  // namespace ccl
