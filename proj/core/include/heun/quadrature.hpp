#pragma once

// Composite 32-point Gauss-Legendre quadrature with panel doubling.
// Integrands handed to it must be smooth on the closed interval; endpoint
// square-root singularities are removed by substitution at the call site.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <string>
#include <vector>

#include "heun/error.hpp"

namespace heun {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // positive, sum to 2
  std::size_t order() const { return nodes.size(); }
};

/// The 32-point Gauss-Legendre rule (shared, immutable).
const QuadratureRule& gauss_legendre_32();

struct QuadratureOptions {
  /// Stop once successive estimates differ by less than
  /// abs_tol + rel_tol * |estimate|.
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  std::size_t initial_panels = 1;
  std::size_t max_panels = std::size_t{1} << 14;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  std::size_t panels = 0;
};

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
template <class R>
double magnitude(const std::complex<R>& z) {
  return static_cast<double>(std::abs(z));
}
// Small vector-valued integrands provide their own max-norm.
template <class T>
  requires requires(const T& x) { { x.norm_inf() } -> std::convertible_to<double>; }
double magnitude(const T& x) {
  return x.norm_inf();
}

}  // namespace detail

/// Fixed composite rule with `panels` equal panels.
template <class F>
auto composite_gauss(F&& f, double a, double b, std::size_t panels) {
  using T = decltype(f(a));
  const auto& rule = gauss_legendre_32();
  const double h = (b - a) / static_cast<double>(panels);
  T sum{};
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    T panel{};
    for (std::size_t k = 0; k < rule.order(); ++k) {
      panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    }
    sum += panel;
  }
  return T(sum * (0.5 * h));
}

/// Doubles the panel count until two successive estimates agree. Throws
/// QuadratureNonConvergence if max_panels is reached first.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  using T = decltype(f(a));
  std::size_t panels = std::max<std::size_t>(1, opts.initial_panels);
  T prev = composite_gauss(f, a, b, panels);
  while (panels < opts.max_panels) {
    panels *= 2;
    const T cur = composite_gauss(f, a, b, panels);
    const double diff = detail::magnitude(cur - prev);
    if (!std::isfinite(diff)) break;
    if (diff <= opts.abs_tol + opts.rel_tol * detail::magnitude(cur)) {
      return QuadratureResult<T>{cur, diff, panels};
    }
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureNonConvergence,
              "no convergence with " + std::to_string(panels) + " panels");
}

}  // namespace heun
