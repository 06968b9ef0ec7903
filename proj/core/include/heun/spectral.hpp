#pragma once

// Heine-Stieltjes spectral problem for the Heun operator
//
//   T = Q(z) d^2/dz^2 + P(z) d/dz - theta_n (z - lambda),
//   Q(z) = z^3 + v z^2 + w z,  P(z) = alpha z^2 + beta z + gamma,
//
// written in the frame where one root of Q sits at the origin. The
// coefficients of T(S) for S = u_0 z^n + ... + u_n are M_n(lambda) U with a
// tridiagonal M_n, so Sp_n(lambda) = det M_n follows a three-term recurrence.
//
// All matrix entries, root iterations and null vectors are carried in quad
// precision (see precision.hpp); public results are rounded to double.

#include <cstddef>
#include <optional>
#include <vector>

#include "heun/poly.hpp"
#include "heun/precision.hpp"

namespace heun {

/// theta_n = n (n - 1 + alpha). Throws DegenerateTheta when it vanishes.
Complex theta_n(int n, Complex alpha);

/// The (n+1) x (n+1) tridiagonal lambda-matrix M_n. Accessors use the 1-based
/// row indices of the recurrence: xi(1..n+1), alpha(2..n+1), gamma(2..n+1).
class SpectralMatrix {
 public:
  SpectralMatrix(const ShiftedCubic& sc, const LowDegreePoly& p, int n);

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) + 1; }
  const QComplex& theta() const { return theta_; }

  const QComplex& xi(std::size_t i) const { return diag_.at(i - 1); }
  const QComplex& alpha(std::size_t i) const { return upper_.at(i - 2); }
  const QComplex& gamma(std::size_t i) const { return lower_.at(i - 2); }
  QComplex psi(std::size_t i) const { return alpha(i) * gamma(i); }

  const std::vector<QComplex>& diagonal() const { return diag_; }
  const std::vector<QComplex>& upper() const { return upper_; }
  const std::vector<QComplex>& lower() const { return lower_; }

  const ShiftedCubic& cubic() const { return cubic_; }
  const LowDegreePoly& p() const { return p_; }

  /// Diameter of the roots of Q (at least tiny); tolerances are relative to it.
  double scale() const;

 private:
  int n_;
  QComplex theta_;
  std::vector<QComplex> diag_;
  std::vector<QComplex> upper_;
  std::vector<QComplex> lower_;
  ShiftedCubic cubic_;
  LowDegreePoly p_;
  double scale_;
};

SpectralMatrix build_matrix(const ShiftedCubic& sc, const LowDegreePoly& p, int n);

/// mantissa * 2^exponent with 1 <= |mantissa| < 2; zero is {0, 0}.
struct ScaledValue {
  Complex mantissa = 0.0;
  long exponent = 0;

  static ScaledValue normalized(const QComplex& value, long exponent);

  bool is_zero() const { return mantissa == 0.0; }
  /// May overflow to infinity for very large exponents.
  Complex value() const;
  /// log2 |value|; -inf for zero.
  double log2_abs() const;
};

/// Sp_{n,k}(lambda), 0 <= k <= n+1, by the three-term recurrence with
/// renormalisation at every step. k = n+1 gives det M_n(lambda).
ScaledValue sp_eval(const SpectralMatrix& m, Complex lambda, std::size_t k);
ScaledValue sp_eval(const SpectralMatrix& m, const QComplex& lambda, std::size_t k);

/// Newton ratio Sp_n(lambda) / Sp_n'(lambda) in quad precision.
QComplex newton_ratio(const SpectralMatrix& m, const QComplex& lambda);

/// Root-counting measure: n+1 atoms with weight 1/(n+1). Repeated atoms
/// carry their multiplicity; residual is the relative Newton step |Sp/Sp'|
/// at the polished root divided by the matrix scale.
struct EmpiricalMeasure {
  std::vector<Complex> atoms;
  std::vector<int> multiplicity;
  std::vector<double> residual;
  /// The same atoms before rounding to double (empty if unavailable).
  std::vector<QComplex> precise;

  std::size_t size() const { return atoms.size(); }
  double weight() const { return atoms.empty() ? 0.0 : 1.0 / static_cast<double>(atoms.size()); }
  /// Same measure pushed forward by z -> z + c.
  EmpiricalMeasure translated(Complex c) const;
};

struct RootOptions {
  /// Aberth stops when the largest correction is below tol * spread.
  double tol = 1e-12;
  int max_iterations = 200;
  /// Roots closer than merge_tol * scale are reported as one multiple root.
  double merge_tol = 1e-7;
  /// Worker threads for the per-root sweep; results do not depend on it.
  int threads = 1;
};

/// All n+1 roots of Sp_n via simultaneous Aberth-Ehrlich iteration on the
/// scaled recurrence. Throws RootFindingFailure if the budget runs out.
EmpiricalMeasure spectral_roots(const SpectralMatrix& m, const RootOptions& opts = {});

/// Stieltjes polynomial S(z) = sum_k u_k z^{n-k}, u_0 = 1, attached to the
/// spectral root lambda (shifted frame).
struct PolynomialSolution {
  std::vector<QComplex> coefficients;
  QComplex lambda;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  Complex coefficient(std::size_t k) const { return to_double(coefficients.at(k)); }
  std::vector<Complex> coefficients_double() const;
};

/// Newton-polishes lambda on Sp_n in quad precision, then solves M_n U = 0
/// with u_0 = 1. The null vector joins a forward sweep from u_0 and a
/// backward sweep from u_n at the largest forward component, which keeps
/// the small trailing coefficients accurate; inverse iteration takes over if
/// a pivot vanishes. Throws NullSpaceFailure when no null vector with
/// u_0 != 0 exists.
PolynomialSolution recover_solution(const SpectralMatrix& m, Complex lambda);
PolynomialSolution recover_solution(const SpectralMatrix& m, const QComplex& lambda);

/// ||M_n(lambda) U||_inf / ||U||_inf for the solution's own lambda.
double null_vector_residual(const SpectralMatrix& m, const PolynomialSolution& s);

/// max |coeff of T(S)| / max |coeff of S|, with T applied coefficient-wise
/// (independently of M_n).
double operator_residual(const ShiftedCubic& sc, const LowDegreePoly& p,
                         const PolynomialSolution& s);

/// Roots of S (shifted frame), computed in quad precision.
std::vector<Complex> solution_roots(const PolynomialSolution& s);

/// max_i |xi_{n,i} - xi(i/(n+1))| + |psi_{n,i} - psi(i/(n+1))|.
double coefficient_limit_deviation(const SpectralMatrix& m);

/// (1/(n+1)) sum 1/(z - t_j). Throws AtomHit if z sits on an atom.
Complex cauchy_transform_empirical(const EmpiricalMeasure& mu, Complex z);

/// (1/(n+1)) sum log|z - t_j|. Throws AtomHit if z sits on an atom.
double log_potential_empirical(const EmpiricalMeasure& mu, Complex z);

/// P either as the Lame choice Q'/2 or as explicit coefficients given in the
/// original coordinate.
struct PChoice {
  std::optional<LowDegreePoly> global;

  static PChoice lame() { return {}; }
  static PChoice explicit_poly(const LowDegreePoly& p) { return {p}; }
  bool is_lame() const { return !global.has_value(); }

  /// Coefficients of P in the frame of the shifted cubic.
  LowDegreePoly in_frame(const ShiftedCubic& sc) const;
};

/// End-to-end helper: spectral roots in the original coordinate, built in
/// the frame of root `origin`.
struct SpectrumResult {
  SpectralMatrix matrix;
  EmpiricalMeasure measure;  // original coordinate
};

SpectrumResult compute_spectrum(const CubicConfig& c, const PChoice& p, int n,
                                std::size_t origin = 0, const RootOptions& opts = {});

/// Roots of the Stieltjes polynomials of one (Q, P, n), in original
/// coordinates. S is recovered in the frame of each root of Q, and the Aberth
/// iteration evaluates S/S' at z in the expansion about the root of Q nearest
/// to z: roots accumulating at a vertex are well conditioned only there.
///
/// The root set is refined by Newton steps on the equilibrium conditions
///   Q(x_k) sum_{j != k} 2 / (x_k - x_j) + P(x_k) = 0
/// and accepted only if they hold to relative 1e-20. The monomial
/// expansions lose accuracy roughly exponentially in n; at n = 50 every
/// polynomial of the reference cubic passes, beyond about n = 60 some fail
/// with RootFindingFailure.
class StieltjesSolver {
 public:
  StieltjesSolver(const CubicConfig& c, const PChoice& p, int n);

  /// lambda is a spectral root in original coordinates.
  std::vector<Complex> roots(const QComplex& lambda) const;
  /// S expanded about root `frame` of Q.
  PolynomialSolution solution(const QComplex& lambda, std::size_t frame) const;
  const SpectralMatrix& matrix(std::size_t frame) const { return frames_.at(frame); }

 private:
  CubicConfig cubic_;
  std::vector<SpectralMatrix> frames_;
};

}  // namespace heun
