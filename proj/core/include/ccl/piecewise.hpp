#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ccl {

/// Knobs for adaptive construction.
struct ApproxOptions {
  double rel_tol = 1e-13;
  std::size_t min_degree = 16;
  std::size_t max_degree = 8192;
  std::size_t max_pieces = 64;
};

struct RootOptions {
  /// Roots closer than this are merged.
  double root_tol = 1e-12;
  /// Eigenvalues with |imag| > imag_tol * piece width are not real roots.
  double imag_tol = 1e-10;
};

struct Range {
  double min = 0.0;
  double max = 0.0;
};

struct Extrema {
  double argmin = 0.0;
  double min = 0.0;
  double argmax = 0.0;
  double max = 0.0;
};

/// Piecewise Chebyshev series on [breakpoints.front(), breakpoints.back()].
///
/// Piece i lives on [breakpoints[i], breakpoints[i+1]] and is stored as
/// coefficients of T_k on the affinely mapped reference interval.  One-sided
/// values at a shared breakpoint may differ, so jumps are representable.
/// Instances are immutable after construction.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  /// Throws ConfigError unless breakpoints are strictly increasing and there is
  /// one non-empty coefficient vector per interval.
  PiecewiseFunction(std::vector<double> breakpoints, std::vector<std::vector<double>> coeffs);

  /// Piecewise constant function with the given values on consecutive intervals.
  static PiecewiseFunction constants(std::vector<double> breakpoints, std::span<const double> values);

  bool empty() const noexcept { return coeffs_.empty(); }
  std::size_t num_pieces() const noexcept { return coeffs_.size(); }
  double lo() const noexcept { return breakpoints_.front(); }
  double hi() const noexcept { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& coeffs(std::size_t piece) const { return coeffs_.at(piece); }
  std::size_t degree(std::size_t piece) const { return coeffs_.at(piece).size() - 1; }
  std::size_t max_degree() const noexcept;

  /// Index of the piece containing x; interior breakpoints belong to the
  /// piece on their right, the last breakpoint to the last piece.
  std::size_t find_piece(double x) const;

  /// Value at x; right-limit at interior breakpoints.  DomainError outside.
  double operator()(double x) const;

  /// Piece polynomial at x without any domain check (extrapolates).
  double evaluate_piece(std::size_t piece, double x) const;

  double left_value(std::size_t piece) const;   // at breakpoints[piece]
  double right_value(std::size_t piece) const;  // at breakpoints[piece + 1]

  /// max |coefficient sum| style magnitude of a piece; used to scale tolerances.
  double vscale(std::size_t piece) const;
  double vscale() const;

  /// scale * f + shift, same breakpoints.
  PiecewiseFunction affine(double scale, double shift) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> coeffs_;
};

/// Adaptive piecewise approximation of f on [lo, hi].
///
/// f is never sampled at lo, hi or at any hint; each interval between
/// consecutive hints is resolved independently.  A piece is accepted once
/// the trailing Chebyshev coefficients drop below rel_tol relative to the
/// sampled magnitude.  If max_degree is reached the piece is bisected.
/// Throws ApproximationError when max_pieces would be exceeded.
PiecewiseFunction approximate(const std::function<double(double)>& f, double lo, double hi,
                              std::span<const double> hints = {},
                              const ApproxOptions& options = {});

double evaluate(const PiecewiseFunction& pf, double x);

/// Sorted real roots of every piece, merged within root_tol.  A piece that is
/// identically zero contributes its endpoints and midpoint.
std::vector<double> roots(const PiecewiseFunction& pf, const RootOptions& options = {});

/// Continuous antiderivative vanishing at the left endpoint.
PiecewiseFunction antiderivative(const PiecewiseFunction& pf);

/// Piecewise derivative (no delta contributions at jumps).
PiecewiseFunction derivative(const PiecewiseFunction& pf);

Range range(const PiecewiseFunction& pf);
Extrema extrema(const PiecewiseFunction& pf);

/// Interior breakpoints with |right value - left value| > threshold.
std::vector<double> jumps(const PiecewiseFunction& pf, double threshold);

/// Default jump threshold: 10 * vscale * machine epsilon.
double default_jump_threshold(const PiecewiseFunction& pf);

}  // namespace ccl
