#pragma once

// Cauchy transforms and logarithmic potentials of the averaged arcsine
// measure M attached to one root of Q (shifted frame, root at the origin):
//
//   C(z) = int_0^1 dtheta / sqrt((v^2 - 4w) theta^4 + (2 v z + 4 w) theta^2 + z^2).
//
// The square root is never tracked along theta. Each theta contributes the
// arcsine transform of its own chord, whose branch is fixed by z C -> 1 at
// infinity; off the support this is the continuous choice.

#include <vector>

#include "heun/measure.hpp"
#include "heun/quadrature.hpp"
#include "heun/spectral.hpp"

namespace heun {

struct CauchyOptions {
  QuadratureOptions quad{};
  /// Minimum distance from the support required of every evaluation point.
  double margin = 1e-8;
};

/// 1 / sqrt((z - e1)(z - e2)) with z C -> 1 at infinity; 1/(z - p) for a
/// point segment. Throws OnSupport on the closed segment.
Complex cauchy_arcsine(const ComplexSegment& seg, Complex z);

/// Closed-form potential of the arcsine measure, log|(z - m + sqrt((z-e1)(z-e2))) / 2|.
double log_potential_arcsine(const ComplexSegment& seg, Complex z);

/// Throws OnOrInsideSupport unless z is outside the support with the margin.
void require_outside(const LimitProfile& p, Complex z, double margin);

Complex cauchy_M(const LimitProfile& p, Complex z, const CauchyOptions& opts = {});

struct TransformSample {
  Complex z;
  Complex C;
  Complex dC;
  Complex d2C;
  Complex residual;
};

/// C and its first two z-derivatives by quadrature of the differentiated
/// integrands (one pass, shared panels).
TransformSample cauchy_M_derivatives(const LimitProfile& p, Complex z,
                                     const CauchyOptions& opts = {});

/// Coefficients of the inhomogeneous equation
///   Q C'' + Q' C' + c2 Q'' C + c3 Q''' = 0.
struct HeunCoefficients {
  double c2 = 1.0 / 8.0;
  double c3 = 1.0 / 24.0;
};

/// Left-hand side of the equation for monic Q = z (z^2 + v z + w).
TransformSample heun_ode_residual(const ShiftedCubic& sc, Complex z,
                                  const HeunCoefficients& coeffs = {},
                                  const CauchyOptions& opts = {});

double log_potential_M(const LimitProfile& p, Complex z, const CauchyOptions& opts = {});

/// s = -16 w (z^2 + v z + w) / a^2, u = v (v + 2 z) / a, a = v^2 - 4 w.
struct SpecialCaseVars {
  Complex s;
  Complex u;
  Complex a;
};

/// Throws ResonantCubic when v^2 - 4w = 0.
SpecialCaseVars special_case_vars(const ShiftedCubic& sc, Complex z);

struct GeneralIntegral {
  Complex value;
  /// Partial derivative in s with u and a held fixed.
  Complex ds;
};

/// I_nu = (1/sqrt(2a)) int_{-1}^{1} (t+u)^nu dt / (sqrt(t+1) sqrt((t+u)^2+s)),
/// evaluated through theta = sin(chi), 2 theta^2 = t + 1, with the chordwise
/// branch. I_0 equals cauchy_M.
GeneralIntegral I_nu_general(const ShiftedCubic& sc, Complex z, int nu,
                             const CauchyOptions& opts = {});

/// Residuals of the s-relations among I_0..I_3:
///   rec:   dI_{nu+2} = -I_nu / 2 - s dI_nu            (nu = 0, 1)
///   two:   d(I_2 + I_1) = u dI_1 - I_0 / 4 + B
///   three: d(I_3 - I_1) = (u^2 - 2u) dI_1 - 3 I_1 / 4 + (u - 1) I_0 / 4 + 2 u B
/// with B = 1 / (2 sqrt(a) sqrt((u+1)^2 + s)) = 1 / (4 (z + v)).
struct GeneralRelations {
  Complex rec0;
  Complex rec1;
  Complex two;
  Complex three;
  double max_abs() const;
};

GeneralRelations check_general_relations(const ShiftedCubic& sc, Complex z,
                                         const CauchyOptions& opts = {});

struct TransformDeviation {
  Complex z;
  double cauchy;
  double potential;
};

/// |C_mu - C_M| and |pot_mu - pot_M| at each point. mu and the points are in
/// the original coordinate; sc locates M. Throws PointInsideEllipse for a
/// point not strictly outside the support.
std::vector<TransformDeviation> compare_transforms(const EmpiricalMeasure& mu,
                                                   const ShiftedCubic& sc,
                                                   const std::vector<Complex>& points,
                                                   const CauchyOptions& opts = {});

}  // namespace heun
