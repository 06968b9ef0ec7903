#pragma once

// Cubic Q, the at-most-quadratic P, root-centred shifted forms and the
// convex hull of the roots of Q.
//
// Root indices are 0-based throughout the library (the CLI prints them
// 1-based as E_1, E_2, E_3).

#include <array>
#include <cstddef>
#include <vector>

#include "heun/precision.hpp"

namespace heun {

/// Cubic Q(z) = c (z - a1)(z - a2)(z - a3), stored by its roots.
class CubicConfig {
 public:
  /// Throws Error{DuplicateRoot} when two roots coincide.
  CubicConfig(Complex a1, Complex a2, Complex a3, Complex leading = 1.0);

  const std::array<Complex, 3>& roots() const { return roots_; }
  Complex root(std::size_t i) const { return roots_.at(i); }
  Complex leading() const { return leading_; }

  /// True iff Im((a2 - a1) conj(a3 - a1)) vanishes to relative 1e-12.
  bool collinear() const { return collinear_; }

  Complex centroid() const;
  /// Largest pairwise distance between roots.
  double diameter() const;

  /// Monic value (z - a1)(z - a2)(z - a3).
  Complex monic_value(Complex z) const;

 private:
  std::array<Complex, 3> roots_;
  Complex leading_;
  bool collinear_;
};

CubicConfig cubic_from_roots(Complex a1, Complex a2, Complex a3);

/// Monic cubic in the coordinate z' = z - a_origin: Q(z') = z'(z'^2 + v z' + w).
struct ShiftedCubic {
  Complex v;
  Complex w;
  std::size_t origin = 0;
  /// Position of the origin root in the original coordinate.
  Complex shift = 0.0;

  /// Builds a shifted cubic directly from (v, w). Throws Error{ZeroW} if w == 0.
  static ShiftedCubic from_coefficients(Complex v, Complex w, Complex shift = 0.0);

  /// The two nonzero roots of z^2 + v z + w, in shifted coordinates.
  std::array<Complex, 2> other_roots() const;
  /// All three roots mapped back to the original coordinate, origin root first.
  std::array<Complex, 3> unshifted_roots() const;

  Complex q(Complex z) const { return z * (z * z + v * z + w); }
  Complex dq(Complex z) const { return 3.0 * z * z + 2.0 * v * z + w; }
  Complex d2q(Complex z) const { return 6.0 * z + 2.0 * v; }
  static constexpr double d3q() { return 6.0; }
};

/// Moves root i to the origin. v is minus the sum of the other two shifted
/// roots, w their product.
ShiftedCubic shift_to_root(const CubicConfig& c, std::size_t i);

/// P(z) = alpha z^2 + beta z + gamma.
struct LowDegreePoly {
  Complex alpha;
  Complex beta;
  Complex gamma;

  Complex operator()(Complex z) const { return (alpha * z + beta) * z + gamma; }

  /// Coefficients of P(z' + c) as a polynomial in z'.
  LowDegreePoly translated(Complex c) const;

  /// P = Q'/2 for the monic shifted cubic (the classical Lame case).
  static LowDegreePoly lame(const ShiftedCubic& sc);
};

/// Convex hull of the roots: a counterclockwise triangle, or a segment
/// (two vertices) when the roots are collinear.
class ConvexHull {
 public:
  explicit ConvexHull(std::vector<Complex> vertices);

  const std::vector<Complex>& vertices() const { return vertices_; }
  bool is_segment() const { return vertices_.size() == 2; }
  Complex centroid() const;

  /// Euclidean distance from z to the hull; 0 inside.
  double distance(Complex z) const;

 private:
  std::vector<Complex> vertices_;
};

ConvexHull convex_hull(const CubicConfig& c);

bool in_hull_neighborhood(const ConvexHull& h, Complex z, double eps);

/// Distance from z to the closed segment [p, q].
double segment_distance(Complex z, Complex p, Complex q);

/// Roots of z^2 + b z + c, computed without cancellation.
std::array<Complex, 2> quadratic_roots(Complex b, Complex c);

}  // namespace heun
