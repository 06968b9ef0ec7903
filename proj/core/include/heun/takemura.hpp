#pragma once

// Period integral over a side [a_j, a_k] of the root triangle,
//
//   F_i(b) = int_{a_j}^{a_k} sqrt((b - t) / ((t - a_1)(t - a_2)(t - a_3))) dt,
//
// and the curves gamma_i = {Im F_i = 0} through a_i. With
// t = m + h cos(sigma), m = (a_j + a_k)/2, h = (a_j - a_k)/2, the factor
// dt / sqrt((t - a_j)(t - a_k)) becomes +-i dsigma, so F_i = i G_i with
//
//   G_i(b) = int_0^pi sqrt((b - t) / (t - a_i)) dsigma,
//
// an integral of a smooth periodic function. The overall sign depends on the
// square-root branch and is irrelevant for the zero set of Im F = Re G.

#include <cstddef>
#include <vector>

#include "heun/poly.hpp"

namespace heun {

struct PeriodIntegral {
  Complex value;                    // F = i G
  Complex derivative;               // dF/db
  std::vector<signed char> branch;  // sign flips relative to the principal root, per node
  double error = 0.0;               // difference of the last two panel refinements
};

struct PeriodOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  std::size_t max_panels = std::size_t{1} << 12;
};

/// Throws BranchJump if b is (numerically) on the open segment (a_j, a_k),
/// where nearest-root continuation becomes ambiguous.
PeriodIntegral period_integral(const CubicConfig& c, std::size_t i, Complex b,
                               const PeriodOptions& opts = {});

/// Im F_i(b).
double indicator(const CubicConfig& c, std::size_t i, Complex b, const PeriodOptions& opts = {});

/// dF_i/db = (1/2) int dt / (sqrt(b - t) sqrt(Q(t))), same branch as F.
Complex indicator_gradient(const CubicConfig& c, std::size_t i, Complex b,
                           const PeriodOptions& opts = {});

enum class Termination {
  OppositeEdge,  // came within 2 step of the side [a_j, a_k]
  LeftHull,      // moved more than 2 step outside the hull
  MaxSteps,
  Collinear,     // straight segment, no tracing needed
};

struct TracedCurve {
  std::size_t root = 0;
  std::vector<Complex> points;  // starts at a_root
  double step = 0.0;
  Termination reason = Termination::MaxSteps;
};

struct TraceOptions {
  /// Arc step; <= 0 selects 1e-2 * diameter of the hull.
  double step = 0.0;
  /// Corrector stops once |Im F| < tol.
  double tol = 1e-9;
  int max_steps = 0;  // <= 0: 20 * diameter / step
  PeriodOptions period{};
};

/// Predictor-corrector continuation of gamma_i from a_i towards the hull
/// centroid, continued across the hull until it reaches the opposite side or
/// leaves the hull.
TracedCurve trace_curve(const CubicConfig& c, std::size_t i, const TraceOptions& opts = {});

struct TakemuraTree {
  std::vector<TracedCurve> curves;  // trimmed, each ending at the common point
  Complex common_point;
  double mismatch_radius = 0.0;
};

/// Trims three explored curves to their pieces between a_i and the common
/// point (centroid of the pairwise crossings). Throws Mismatch when the
/// trimmed endpoints spread more than 10 step, LeftHull when a curve leaves
/// the hull before reaching the common point.
TakemuraTree assemble_tree(const CubicConfig& c, std::vector<TracedCurve> curves,
                           const TraceOptions& opts = {});

/// trace_curve for all three roots followed by assemble_tree; collinear
/// roots give the segment between the outer roots.
TakemuraTree trace_tree(const CubicConfig& c, const TraceOptions& opts = {});

/// Distance from z to the union of the tree's polylines.
double distance_to_tree(const TakemuraTree& t, Complex z);

/// Symmetric Hausdorff distance between two polylines.
double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace heun
