#include "ccl/chebyshev.hpp"

#include <fftw3.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace ccl::cheb {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, fftw_r2r_kind kind) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, static_cast<int>(kind));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    double* in = fftw_alloc_real(static_cast<std::size_t>(n));
    double* out = fftw_alloc_real(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_r2r_1d(n, in, out, kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

std::vector<double> run_r2r(std::span<const double> values, fftw_r2r_kind kind) {
  const int n = static_cast<int>(values.size());
  std::vector<double> in(values.begin(), values.end());
  std::vector<double> out(values.size());
  fftw_execute_r2r(plan_cache().get(n, kind), in.data(), out.data());
  return out;
}

Eigen::MatrixXd colleague_matrix(std::span<const double> c) {
  const std::size_t n = c.size() - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  if (n == 1) {
    m(0, 0) = -c[0] / c[1];
    return m;
  }
  m(0, 1) = 1.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    m(k, k - 1) = 0.5;
    m(k, k + 1) = 0.5;
  }
  m(n - 1, n - 2) += 0.5;
  for (std::size_t j = 0; j < n; ++j) m(n - 1, j) -= c[j] / (2.0 * c[n]);
  return m;
}

// Diagonal similarity scaling by powers of two so rows and columns have
// comparable norms.  A tiny leading coefficient makes the last row huge and
// ruins unbalanced eigenvalues.
void balance(Eigen::MatrixXd& m) {
  constexpr double kRadix = 2.0;
  const Eigen::Index n = m.rows();
  bool done = false;
  for (int sweep = 0; !done && sweep < 100; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / kRadix) {
        f *= kRadix;
        c *= kRadix * kRadix;
      }
      while (c > r * kRadix) {
        f /= kRadix;
        c /= kRadix * kRadix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

std::vector<double> chop_absolute(std::vector<double> c, double threshold) {
  while (c.size() > 1 && std::abs(c.back()) <= threshold) c.pop_back();
  return c;
}

// A few Newton steps, each kept only if it reduces |p|.
double polish(std::span<const double> c, double x) {
  double value = 0.0;
  double slope = 0.0;
  evaluate_with_derivative(c, x, value, slope);
  for (int it = 0; it < 3 && value != 0.0; ++it) {
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double candidate = std::clamp(x - value / slope, -1.0, 1.0);
    double v = 0.0;
    double d = 0.0;
    evaluate_with_derivative(c, candidate, v, d);
    if (!(std::abs(v) < std::abs(value))) break;
    x = candidate;
    value = v;
    slope = d;
  }
  return x;
}

void roots_direct(std::span<const double> c, double imag_tol, std::vector<double>& out) {
  if (c.size() < 2) return;
  if (c.size() == 2) {
    const double r = -c[0] / c[1];
    if (r >= -1.0 - 1e-12 && r <= 1.0 + 1e-12) out.push_back(std::clamp(r, -1.0, 1.0));
    return;
  }
  Eigen::MatrixXd m = colleague_matrix(c);
  balance(m);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  const auto& eig = solver.eigenvalues();
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double re = eig[i].real();
    const double im = eig[i].imag();
    if (std::abs(im) > imag_tol) continue;
    if (re < -1.0 - 1e-8 || re > 1.0 + 1e-8) continue;
    out.push_back(polish(c, std::clamp(re, -1.0, 1.0)));
  }
}

// Restriction of the series to [a, b] within [-1, 1], as a series on [-1, 1].
std::vector<double> restrict_to(std::span<const double> c, double a, double b) {
  const std::size_t n = c.size();
  auto nodes = first_kind_points(n);
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j)
    values[j] = evaluate(c, 0.5 * (a + b) + 0.5 * (b - a) * nodes[j]);
  return coeffs_from_first_kind(values);
}

// Boyd-style recursive subdivision.  [a, b] is the parent-coordinate interval
// covered by c; roots are reported in parent coordinates.
void roots_recursive(std::span<const double> c, double a, double b, double imag_tol,
                     double noise, std::size_t max_direct, int depth,
                     std::vector<double>& out) {
  if (c.size() <= max_direct + 1 || depth > 40 || (b - a) < 1e-13) {
    std::vector<double> local;
    // imag_tol is expressed on the top-level reference interval.
    roots_direct(c, imag_tol * 2.0 / (b - a), local);
    for (double r : local) out.push_back(0.5 * (a + b) + 0.5 * (b - a) * r);
    return;
  }
  // Asymmetric split so that roots sitting at simple rationals are not
  // duplicated on both halves.
  constexpr double kSplit = -0.004849834917525;
  const double mid = 0.5 * (a + b) + 0.5 * (b - a) * kSplit;
  auto left = chop_absolute(restrict_to(c, -1.0, kSplit), noise);
  auto right = chop_absolute(restrict_to(c, kSplit, 1.0), noise);
  roots_recursive(left, a, mid, imag_tol, noise, max_direct, depth + 1, out);
  roots_recursive(right, mid, b, imag_tol, noise, max_direct, depth + 1, out);
}

}  // namespace

std::vector<double> first_kind_points(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j)
    x[j] = std::cos((static_cast<double>(j) + 0.5) * std::numbers::pi / static_cast<double>(n));
  return x;
}

std::vector<double> lobatto_points(std::size_t n) {
  std::vector<double> x(n + 1);
  if (n == 0) {
    x[0] = 0.0;
    return x;
  }
  for (std::size_t j = 0; j <= n; ++j)
    x[j] = std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n));
  return x;
}

std::vector<double> coeffs_from_first_kind(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 1) return {values[0]};
  auto y = run_r2r(values, FFTW_REDFT10);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : y) v *= scale;
  y[0] *= 0.5;
  return y;
}

std::vector<double> coeffs_from_lobatto(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m == 1) return {values[0]};
  const std::size_t n = m - 1;
  auto y = run_r2r(values, FFTW_REDFT00);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : y) v *= scale;
  y[0] *= 0.5;
  y[n] *= 0.5;
  return y;
}

double evaluate(std::span<const double> c, double x) {
  const std::size_t n = c.size();
  if (n == 0) return 0.0;
  if (n == 1) return c[0];
  double b1 = 0.0;
  double b2 = 0.0;
  const double two_x = 2.0 * x;
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double b0 = c[k] + two_x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

void evaluate_with_derivative(std::span<const double> c, double x, double& value,
                              double& derivative) {
  // Forward recurrence on T_k and T_k'; stable enough on [-1, 1] for the
  // degrees used when polishing roots.
  value = 0.0;
  derivative = 0.0;
  if (c.empty()) return;
  double t_prev = 1.0;
  double t_cur = x;
  double d_prev = 0.0;
  double d_cur = 1.0;
  value = c[0];
  if (c.size() == 1) return;
  value += c[1] * t_cur;
  derivative += c[1] * d_cur;
  for (std::size_t k = 2; k < c.size(); ++k) {
    const double t_next = 2.0 * x * t_cur - t_prev;
    const double d_next = 2.0 * t_cur + 2.0 * x * d_cur - d_prev;
    value += c[k] * t_next;
    derivative += c[k] * d_next;
    t_prev = t_cur;
    t_cur = t_next;
    d_prev = d_cur;
    d_cur = d_next;
  }
}

std::vector<double> differentiate(std::span<const double> c) {
  const std::size_t n = c.size();
  if (n <= 1) return {0.0};
  std::vector<double> d(n + 1, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) d[k] = d[k + 2] + 2.0 * static_cast<double>(k + 1) * c[k + 1];
  d[0] *= 0.5;
  d.resize(n - 1);
  return d;
}

std::vector<double> integrate(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> b(n + 1, 0.0);
  auto coef = [&](std::size_t k) { return k < n ? c[k] : 0.0; };
  b[1] = coef(0) - 0.5 * coef(2);
  for (std::size_t k = 2; k <= n; ++k)
    b[k] = (coef(k - 1) - coef(k + 1)) / (2.0 * static_cast<double>(k));
  double at_left = 0.0;
  double sign = -1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    at_left += sign * b[k];
    sign = -sign;
  }
  b[0] = -at_left;
  return b;
}

std::vector<double> chop(std::vector<double> c, double tol) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  return chop_absolute(std::move(c), tol * scale);
}

std::vector<double> real_roots(std::span<const double> c_in, double imag_tol,
                               std::size_t max_direct_degree) {
  double scale = 0.0;
  for (double v : c_in) scale += std::abs(v);
  std::vector<double> out;
  if (scale == 0.0) return out;
  const double noise = 4.0 * kEps * scale;
  auto c = chop_absolute(std::vector<double>(c_in.begin(), c_in.end()), noise);
  if (c.size() < 2) return out;
  roots_recursive(c, -1.0, 1.0, imag_tol, noise, max_direct_degree, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> differentiation_matrix(std::size_t n) {
  const std::size_t m = n + 1;
  std::vector<double> d(m * m, 0.0);
  if (n == 0) return d;
  auto x = lobatto_points(n);
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = (i == 0 || i == n) ? 2.0 : 1.0;
    if (i % 2 == 1) w[i] = -w[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double v = (w[i] / w[j]) / (x[i] - x[j]);
      d[i * m + j] = v;
      row_sum += v;
    }
    d[i * m + i] = -row_sum;
  }
  return d;
}

std::vector<double> clenshaw_curtis_weights(std::size_t n) {
  std::vector<double> w(n + 1, 0.0);
  if (n == 0) {
    w[0] = 2.0;
    return w;
  }
  const double nn = static_cast<double>(n);
  std::vector<double> theta(n + 1);
  for (std::size_t j = 0; j <= n; ++j) theta[j] = static_cast<double>(j) * std::numbers::pi / nn;
  std::vector<double> v(n + 1, 1.0);
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (nn * nn - 1.0);
    for (std::size_t k = 1; k < n / 2; ++k) {
      const double kk = static_cast<double>(k);
      for (std::size_t j = 1; j < n; ++j) v[j] -= 2.0 * std::cos(2.0 * kk * theta[j]) / (4.0 * kk * kk - 1.0);
    }
    for (std::size_t j = 1; j < n; ++j) v[j] -= std::cos(nn * theta[j]) / (nn * nn - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (nn * nn);
    for (std::size_t k = 1; k <= (n - 1) / 2; ++k) {
      const double kk = static_cast<double>(k);
      for (std::size_t j = 1; j < n; ++j) v[j] -= 2.0 * std::cos(2.0 * kk * theta[j]) / (4.0 * kk * kk - 1.0);
    }
  }
  for (std::size_t j = 1; j < n; ++j) w[j] = 2.0 * v[j] / nn;
  return w;
}

}  // namespace ccl::cheb
