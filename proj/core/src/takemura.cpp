#include "heun/takemura.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "heun/error.hpp"
#include "heun/quadrature.hpp"

namespace heun {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI(0.0, 1.0);

struct SideFrame {
  Complex ai, mid, half;
  double scale;
};

SideFrame side_frame(const CubicConfig& c, std::size_t i) {
  if (i > 2) throw Error(ErrorCode::InvalidArgument, "root index must be 0, 1 or 2");
  const Complex aj = c.root((i + 1) % 3);
  const Complex ak = c.root((i + 2) % 3);
  return {c.root(i), 0.5 * (aj + ak), 0.5 * (aj - ak), std::max(1e-300, c.diameter())};
}

struct GEval {
  Complex g, dg;
  std::vector<signed char> branch;
};

// G and G' on a composite rule with `panels` panels, continuing the square
// root from sigma = 0 by nearest-root selection.
GEval evaluate_g(const SideFrame& f, Complex b, std::size_t panels) {
  const auto& rule = gauss_legendre_32();
  const double h = kPi / static_cast<double>(panels);
  GEval out{0.0, 0.0, {}};
  out.branch.reserve(panels * rule.order());
  // Reference value at sigma = 0 (t = a_j).
  Complex prev = std::sqrt((b - (f.mid + f.half)) / (f.mid + f.half - f.ai));
  for (std::size_t p = 0; p < panels; ++p) {
    const double centre = h * (static_cast<double>(p) + 0.5);
    for (std::size_t k = 0; k < rule.order(); ++k) {
      const double sigma = centre + 0.5 * h * rule.nodes[k];
      const Complex t = f.mid + f.half * std::cos(sigma);
      const Complex num = b - t;
      if (std::abs(num) <= 1e-13 * f.scale) {
        throw Error(ErrorCode::BranchJump, "b lies on the integration segment");
      }
      Complex g = std::sqrt(num / (t - f.ai));
      const double same = std::abs(g - prev);
      const double flip = std::abs(g + prev);
      if (std::min(same, flip) > 0.9 * std::max(same, flip)) {
        throw Error(ErrorCode::BranchJump, "square-root continuation is ambiguous");
      }
      signed char flipped = 0;
      if (flip < same) {
        g = -g;
        flipped = 1;
      }
      out.branch.push_back(flipped);
      prev = g;
      const double w = 0.5 * h * rule.weights[k];
      out.g += w * g;
      out.dg += w / (2.0 * g * (t - f.ai));
    }
  }
  return out;
}

GEval converged_g(const SideFrame& f, Complex b, const PeriodOptions& opts, double* error) {
  std::size_t panels = 2;
  GEval prev = evaluate_g(f, b, panels);
  while (panels < opts.max_panels) {
    panels *= 2;
    GEval cur = evaluate_g(f, b, panels);
    const double err = std::max(std::abs(cur.g - prev.g), std::abs(cur.dg - prev.dg) * f.scale);
    const double mag = std::max(std::abs(cur.g), std::abs(cur.dg) * f.scale);
    if (err <= opts.abs_tol + opts.rel_tol * mag) {
      if (error) *error = err;
      return cur;
    }
    prev = std::move(cur);
  }
  throw Error(ErrorCode::QuadratureNonConvergence, "period integral did not converge");
}

double polyline_distance(const std::vector<Complex>& line, Complex z) {
  if (line.empty()) return std::numeric_limits<double>::infinity();
  if (line.size() == 1) return std::abs(z - line[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    best = std::min(best, segment_distance(z, line[k], line[k + 1]));
  }
  return best;
}

std::optional<Complex> segment_intersection(Complex p1, Complex p2, Complex q1, Complex q2) {
  const Complex r = p2 - p1, s = q2 - q1;
  const double denom = r.real() * s.imag() - r.imag() * s.real();
  if (denom == 0.0) return std::nullopt;
  const Complex d = q1 - p1;
  const double t = (d.real() * s.imag() - d.imag() * s.real()) / denom;
  const double u = (d.real() * r.imag() - d.imag() * r.real()) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return p1 + t * r;
}

// Where two polylines cross; the closest approach if they do not.
std::vector<Complex> crossings(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (auto x = segment_intersection(a[i], a[i + 1], b[j], b[j + 1])) out.push_back(*x);
    }
  }
  if (out.empty()) {
    double best = std::numeric_limits<double>::infinity();
    Complex where = 0.0;
    for (const auto& p : a) {
      for (std::size_t j = 0; j + 1 < b.size(); ++j) {
        const double d = segment_distance(p, b[j], b[j + 1]);
        if (d < best) {
          best = d;
          where = p;
        }
      }
    }
    for (const auto& p : b) {
      for (std::size_t j = 0; j + 1 < a.size(); ++j) {
        const double d = segment_distance(p, a[j], a[j + 1]);
        if (d < best) {
          best = d;
          where = p;
        }
      }
    }
    out.push_back(where);
  }
  return out;
}

// Middle root and the two outer ones of a collinear configuration.
std::size_t middle_root(const CubicConfig& c) {
  const auto h = convex_hull(c);
  for (std::size_t i = 0; i < 3; ++i) {
    if (c.root(i) != h.vertices()[0] && c.root(i) != h.vertices()[1]) return i;
  }
  return 0;
}

TracedCurve collinear_curve(const CubicConfig& c, std::size_t i, double step) {
  const std::size_t mid = middle_root(c);
  TracedCurve curve;
  curve.root = i;
  curve.step = step;
  curve.reason = Termination::Collinear;
  curve.points.push_back(c.root(i));
  if (i != mid) curve.points.push_back(c.root(mid));
  return curve;
}

double default_step(const CubicConfig& c, const TraceOptions& opts) {
  return opts.step > 0.0 ? opts.step : 1e-2 * c.diameter();
}

// Newton on Re G along the gradient; returns nullopt if it fails to settle.
std::optional<Complex> correct(const SideFrame& f, Complex b, const TraceOptions& opts,
                               Complex* dg_out) {
  for (int it = 0; it < 30; ++it) {
    GEval e;
    try {
      e = converged_g(f, b, opts.period, nullptr);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::BranchJump) return std::nullopt;
      throw;
    }
    if (!std::isfinite(e.g.real()) || e.dg == 0.0) return std::nullopt;
    if (std::abs(e.g.real()) < opts.tol) {
      if (dg_out) *dg_out = e.dg;
      return b;
    }
    b -= e.g.real() / e.dg;
  }
  return std::nullopt;
}

}  // namespace

PeriodIntegral period_integral(const CubicConfig& c, std::size_t i, Complex b,
                               const PeriodOptions& opts) {
  const SideFrame f = side_frame(c, i);
  double err = 0.0;
  GEval e = converged_g(f, b, opts, &err);
  return {kI * e.g, kI * e.dg, std::move(e.branch), err};
}

double indicator(const CubicConfig& c, std::size_t i, Complex b, const PeriodOptions& opts) {
  return period_integral(c, i, b, opts).value.imag();
}

Complex indicator_gradient(const CubicConfig& c, std::size_t i, Complex b,
                           const PeriodOptions& opts) {
  return period_integral(c, i, b, opts).derivative;
}

TracedCurve trace_curve(const CubicConfig& c, std::size_t i, const TraceOptions& opts) {
  const double step = default_step(c, opts);
  if (c.collinear()) return collinear_curve(c, i, step);
  const SideFrame f = side_frame(c, i);
  const ConvexHull hull = convex_hull(c);
  const Complex centre = hull.centroid();
  const Complex aj = c.root((i + 1) % 3), ak = c.root((i + 2) % 3);
  const int max_steps =
      opts.max_steps > 0 ? opts.max_steps : static_cast<int>(20.0 * c.diameter() / step) + 10;

  TracedCurve curve;
  curve.root = i;
  curve.step = step;
  Complex b = c.root(i);
  curve.points.push_back(b);

  const GEval start = converged_g(f, b, opts.period, nullptr);
  Complex dir = kI / start.dg;
  dir /= std::abs(dir);
  if (std::abs(b + step * dir - centre) > std::abs(b - step * dir - centre)) dir = -dir;

  for (int n = 0; n < max_steps; ++n) {
    double h = step;
    std::optional<Complex> next;
    Complex dg = 0.0;
    for (int attempt = 0; attempt < 8 && !next; ++attempt, h *= 0.5) {
      next = correct(f, b + h * dir, opts, &dg);
      if (next && (std::abs(*next - b) > 2.0 * step || std::abs(*next - b) < 0.25 * h)) {
        next.reset();
      }
    }
    if (!next) {
      curve.reason = Termination::MaxSteps;
      return curve;
    }
    Complex nd = kI / dg;
    nd /= std::abs(nd);
    if ((nd * std::conj(dir)).real() < 0.0) nd = -nd;
    dir = nd;
    b = *next;
    curve.points.push_back(b);
    if (segment_distance(b, aj, ak) < 2.0 * step) {
      curve.reason = Termination::OppositeEdge;
      return curve;
    }
    if (hull.distance(b) > 2.0 * step) {
      curve.reason = Termination::LeftHull;
      return curve;
    }
  }
  curve.reason = Termination::MaxSteps;
  return curve;
}

TakemuraTree assemble_tree(const CubicConfig& c, std::vector<TracedCurve> curves,
                           const TraceOptions& opts) {
  if (curves.size() != 3) throw Error(ErrorCode::InvalidArgument, "need three curves");
  const double step = default_step(c, opts);
  TakemuraTree tree;
  if (c.collinear()) {
    tree.curves = std::move(curves);
    tree.common_point = c.root(middle_root(c));
    tree.mismatch_radius = 0.0;
    for (const auto& cv : tree.curves) {
      tree.mismatch_radius =
          std::max(tree.mismatch_radius, std::abs(cv.points.back() - tree.common_point));
    }
    return tree;
  }

  Complex sum = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& a = curves[p].points;
    const auto& b = curves[(p + 1) % 3].points;
    const auto& third = curves[(p + 2) % 3].points;
    const auto xs = crossings(a, b);
    Complex best = xs.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& x : xs) {
      const double d = polyline_distance(third, x);
      if (d < best_d) {
        best_d = d;
        best = x;
      }
    }
    sum += best;
  }
  const Complex common = sum / 3.0;

  const ConvexHull hull = convex_hull(c);
  for (auto& cv : curves) {
    const SideFrame f = side_frame(c, cv.root);
    std::size_t idx = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cv.points.size(); ++k) {
      const double d = std::abs(cv.points[k] - common);
      if (d < best) {
        best = d;
        idx = k;
      }
    }
    // Drop the nearest vertex when it already lies past the common point.
    if (idx > 0) {
      const Complex run = cv.points[idx] - cv.points[idx - 1];
      if (((common - cv.points[idx]) * std::conj(run)).real() < 0.0) --idx;
    }
    cv.points.resize(idx + 1);
    for (const auto& p : cv.points) {
      if (hull.distance(p) > 2.0 * step) {
        throw Error(ErrorCode::LeftHull, "curve " + std::to_string(cv.root + 1) +
                                             " leaves the hull before the common point");
      }
    }
    if (auto proj = correct(f, common, opts, nullptr)) {
      if (std::abs(*proj - common) <= 10.0 * step && std::abs(*proj - cv.points.back()) > 0.0) {
        cv.points.push_back(*proj);
      }
    }
  }

  double radius = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t q = p + 1; q < 3; ++q) {
      radius = std::max(radius, std::abs(curves[p].points.back() - curves[q].points.back()));
    }
  }
  if (radius > 10.0 * step) {
    throw Error(ErrorCode::Mismatch, "curve endpoints spread over " + std::to_string(radius));
  }
  tree.curves = std::move(curves);
  tree.common_point = common;
  tree.mismatch_radius = radius;
  return tree;
}

TakemuraTree trace_tree(const CubicConfig& c, const TraceOptions& opts) {
  std::vector<TracedCurve> curves;
  for (std::size_t i = 0; i < 3; ++i) curves.push_back(trace_curve(c, i, opts));
  return assemble_tree(c, std::move(curves), opts);
}

double distance_to_tree(const TakemuraTree& t, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cv : t.curves) best = std::min(best, polyline_distance(cv.points, z));
  return best;
}

double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double h = 0.0;
  for (const auto& p : a) h = std::max(h, polyline_distance(b, p));
  for (const auto& p : b) h = std::max(h, polyline_distance(a, p));
  return h;
}

}  // namespace heun
