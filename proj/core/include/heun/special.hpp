#pragma once

// The symmetric cubic Q = z (4 z^2 - 1): with s = 4 z^2 - 1 the transform is
// I_0(s) from the family
//
//   I_nu(s) = (1/sqrt 2) int_{-1}^{1} t^nu dt / (sqrt(t + 1) sqrt(t^2 + s)),   s > 0,
//
// which satisfies 16 s (1+s) I'' + 16 (1+2s) I' + 3 I = -2 / sqrt(1+s).

#include <vector>

#include "heun/quadrature.hpp"

namespace heun {

struct SpecialIntegral {
  double value;
  double ds;   // dI/ds
  double ds2;  // d^2 I / ds^2
};

/// Quadrature in t = -cos(2 chi), which removes the sqrt(t+1) endpoint
/// singularity; s-derivatives come from differentiated integrands.
/// Throws DivergentIntegral for s <= 0.
SpecialIntegral I_nu_special(double s, int nu, const QuadratureOptions& opts = {});

struct SpecialRelations {
  double rec0;   // dI_2 + I_0/2 + s dI_0
  double rec1;   // dI_3 + I_1/2 + s dI_1
  double two;    // d(I_2 + I_1) + I_0/4 - 1/(2 sqrt(1+s))
  double three;  // d(I_3 - I_1) + 3 I_1/4 + I_0/4
  double der1;   // dI_1 - s dI_0 - I_0/4 - 1/(2 sqrt(1+s))
  double max_abs() const;
};

SpecialRelations check_special_relations(double s, const QuadratureOptions& opts = {});

/// 16 s (1+s) I_0'' + 16 (1+2s) I_0' + k I_0 + 2/sqrt(1+s); k = 3 is the
/// true equation, other values serve as controls.
double special_ode_residual(double s, double k = 3.0, const QuadratureOptions& opts = {});

struct SpecialOdeRow {
  double s;
  double ode;         // I_0 from the initial-value integration
  double quadrature;  // I_0 by direct quadrature
};

struct SpecialOdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  QuadratureOptions quad{};
};

/// Integrates the equation from s0 (initial data by quadrature) and samples
/// it at `samples` equally spaced points of [s0, s1]. Throws
/// StepSizeUnderflow if the adaptive step collapses.
std::vector<SpecialOdeRow> solve_special_ode(double s0, double s1, int samples,
                                             const SpecialOdeOptions& opts = {});

/// Complete elliptic integral of the first kind in the parameter convention,
/// K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi), via the AGM.
double elliptic_K(double m);

enum class EllipticConvention { Parameter, Modulus };

/// y1(s) = 2 / (pi (1+s)^(1/4)) K(x), x = (sqrt(1+s) - 1) / (2 sqrt(1+s)),
/// with x read as parameter m or as modulus k (m = k^2).
double y1(double s, EllipticConvention convention = EllipticConvention::Parameter);

/// 16 s (1+s) y1'' + 16 (1+2s) y1' + 3 y1 with five-point differences.
double y1_homogeneous_check(double s,
                            EllipticConvention convention = EllipticConvention::Parameter);

}  // namespace heun
