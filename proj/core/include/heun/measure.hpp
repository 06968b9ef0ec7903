#pragma once

// Limit profiles of the recurrence coefficients, the chord family carrying
// the averaged arcsine measure, and the ellipse bounding it.
//
// With theta = 1 - tau the chords are
//   [-v theta^2 - 2 i u theta sqrt(1 - theta^2), -v theta^2 + 2 i u theta sqrt(1 - theta^2)],
// u the principal square root of w. Their endpoints sweep the ellipse through
// the origin whose foci are the roots of z^2 + v z + w.

#include <array>
#include <optional>

#include "heun/poly.hpp"
#include "heun/precision.hpp"

namespace heun {

struct LimitProfile {
  Complex v;
  Complex w;
  Complex u;  // principal sqrt(w)

  LimitProfile(Complex v, Complex w);
  explicit LimitProfile(const ShiftedCubic& sc) : LimitProfile(sc.v, sc.w) {}
};

/// xi(tau) = -v (1 - tau)^2
Complex xi(const LimitProfile& p, double tau);
/// psi(tau) = -w (1 - (1 - tau)^2) (1 - tau)^2
Complex psi(const LimitProfile& p, double tau);

struct ComplexSegment {
  Complex e1;
  Complex e2;

  Complex midpoint() const { return 0.5 * (e1 + e2); }
  /// Half of e2 - e1.
  Complex half() const { return 0.5 * (e2 - e1); }
  bool degenerate() const { return e1 == e2; }
};

/// Chord at parameter tau in [0, 1]; its midpoint is xi(tau).
ComplexSegment segment_at(const LimitProfile& p, double tau);
/// Chord written in theta = 1 - tau.
ComplexSegment segment_at_theta(const LimitProfile& p, double theta);

/// Unit vector along i u; every nondegenerate chord is parallel to it.
/// Throws ZeroW when w = 0.
Complex segment_direction(const LimitProfile& p);

struct EllipseGeometry {
  // Quadratic form a11 x^2 + 2 a12 x y + a22 y^2 + 2 a13 x + 2 a23 y.
  double a11, a12, a22, a13, a23;
  // A = -Re v, B = -Im u, C = -Im v, D = Re u.
  double A, B, C, D;
  Complex center;
  double semi_major, semi_minor, eccentricity;
  Complex f1, f2;
  // Full determinant, quadratic-part determinant and trace of the form.
  double Delta, delta, iota;
  LimitProfile profile;

  double form(Complex z) const;
  /// Boundary point -v sin^2(phi) + i u sin(2 phi); phi in [0, pi) covers the curve.
  Complex boundary(double phi) const;
  /// Euclidean distance from z to the boundary curve.
  double boundary_distance(Complex z) const;
};

/// BC - AD = Re(v conj(u)); zero exactly when the two nonzero roots of Q lie
/// on opposite sides of the origin on a common line.
double degeneracy(const LimitProfile& p);

/// Throws DegenerateEllipse when BC - AD vanishes (relative 1e-12).
EllipseGeometry ellipse_geometry(const LimitProfile& p);

/// Both boundary points -v sin^2(phi) +- i u sin(2 phi).
std::array<Complex, 2> gamma_param(const LimitProfile& p, double phi);

double ellipse_form_residual(const EllipseGeometry& e, Complex z);

/// True iff z and the center lie on opposite sides of the form and z is at
/// least `margin` away from the boundary.
bool is_strictly_outside(const EllipseGeometry& e, Complex z, double margin);

/// Where the averaged measure lives: the filled ellipse, or the segment
/// between the two nonzero roots when the ellipse degenerates.
class SupportRegion {
 public:
  explicit SupportRegion(const LimitProfile& p);

  bool degenerate() const { return degenerate_; }
  const EllipseGeometry& ellipse() const;
  const ComplexSegment& segment() const { return segment_; }

  /// Same contract as is_strictly_outside, with the segment distance used in
  /// the degenerate case.
  bool outside(Complex z, double margin) const;

 private:
  bool degenerate_;
  std::optional<EllipseGeometry> ellipse_;
  ComplexSegment segment_;
};

}  // namespace heun
