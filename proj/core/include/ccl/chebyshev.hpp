#pragma once

// Low-level Chebyshev series kernels on the reference interval [-1, 1].
// Coefficient vectors are ordered c[0] T_0 + c[1] T_1 + ...

#include <cstddef>
#include <span>
#include <vector>

namespace ccl::cheb {

/// Chebyshev points of the first kind, x_j = cos((j + 1/2) pi / n),
/// j = 0..n-1.  They exclude the endpoints.
std::vector<double> first_kind_points(std::size_t n);

/// Chebyshev-Lobatto points x_j = cos(j pi / n), j = 0..n.
std::vector<double> lobatto_points(std::size_t n);

/// Interpolation coefficients from values at first_kind_points(values.size()).
std::vector<double> coeffs_from_first_kind(std::span<const double> values);

/// Interpolation coefficients from values at lobatto_points(values.size() - 1).
std::vector<double> coeffs_from_lobatto(std::span<const double> values);

/// Clenshaw evaluation.
double evaluate(std::span<const double> c, double x);

/// Value and first derivative in one recurrence.
void evaluate_with_derivative(std::span<const double> c, double x, double& value,
                              double& derivative);

inline double value_at_right(std::span<const double> c) {
  double s = 0.0;
  for (double v : c) s += v;
  return s;
}

inline double value_at_left(std::span<const double> c) {
  double s = 0.0;
  double sign = 1.0;
  for (double v : c) {
    s += sign * v;
    sign = -sign;
  }
  return s;
}

/// d/dx of the series (reference variable).
std::vector<double> differentiate(std::span<const double> c);

/// Antiderivative vanishing at x = -1 (reference variable).
std::vector<double> integrate(std::span<const double> c);

/// Drops trailing coefficients with |c_k| <= tol * max|c|.  Keeps at least one.
std::vector<double> chop(std::vector<double> c, double tol);

/// Real roots in [-1, 1].  Degree <= max_direct_degree is solved through the
/// colleague matrix; larger series are subdivided first.  Eigenvalues with
/// |imag| > imag_tol are discarded; accepted ones get one Newton step.
std::vector<double> real_roots(std::span<const double> c, double imag_tol,
                               std::size_t max_direct_degree = 50);

/// Spectral differentiation matrix on lobatto_points(n), row-major (n+1)^2.
std::vector<double> differentiation_matrix(std::size_t n);

/// Clenshaw-Curtis weights on lobatto_points(n) for integrals over [-1, 1].
std::vector<double> clenshaw_curtis_weights(std::size_t n);

}  // namespace ccl::cheb
