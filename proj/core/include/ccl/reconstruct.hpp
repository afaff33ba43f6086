#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ccl/piecewise.hpp"

namespace ccl {

struct Jump {
  double x = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
};

struct ReconstructOptions {
  /// Uniform scan used to bracket jumps.
  std::size_t scan_points = 2001;
  /// A scan interval is a jump candidate when its increment exceeds both
  /// neighbours by this factor ...
  double neighbour_ratio = 3.0;
  /// ... and the located one-sided values differ by more than this.
  double min_jump = 1e-8;
  /// Bracket width at which bisection stops, relative to max(1, |x|).
  double locate_tol = 1e-14;
  ApproxOptions approx{1e-10, 16, 128, 1024};
  std::size_t workers = 1;
};

struct Reconstruction {
  PiecewiseFunction u;
  std::vector<Jump> jumps;
  /// Tolerance the piecewise approximation actually met.
  double rel_tol = 0.0;
};

/// Brackets jumps of x -> u(x) on [lo, hi] with a uniform scan and refines each
/// by bisection on which one-sided state the midpoint belongs to.
std::vector<Jump> locate_jumps(const std::function<double(double)>& u, double lo, double hi,
                               const ReconstructOptions& options = {});

/// Piecewise approximation of a pointwise solution profile with breakpoints at
/// the located jumps.  Loosens rel_tol by factors of 100 (down to 1e-6) if the
/// profile cannot be resolved at the requested accuracy.
Reconstruction reconstruct(const std::function<double(double)>& u, double lo, double hi,
                           const ReconstructOptions& options = {});

}  // namespace ccl
