#include "heun/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heun/error.hpp"

namespace heun {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

}  // namespace

CubicConfig::CubicConfig(Complex a1, Complex a2, Complex a3, Complex leading)
    : roots_{a1, a2, a3}, leading_(leading) {
  if (leading == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "leading coefficient of Q must be nonzero");
  }
  for (const auto& r : roots_) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
      throw Error(ErrorCode::InvalidArgument, "roots of Q must be finite");
    }
  }
  const double scale = std::max({1.0, std::abs(a1), std::abs(a2), std::abs(a3)});
  const double tiny = 8.0 * std::numeric_limits<double>::epsilon() * scale;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (std::abs(roots_[i] - roots_[j]) <= tiny) {
        throw Error(ErrorCode::DuplicateRoot, "roots a" + std::to_string(i + 1) + " and a" +
                                                  std::to_string(j + 1) + " coincide");
      }
    }
  }
  const Complex e1 = a2 - a1;
  const Complex e2 = a3 - a1;
  const double area = (e1 * std::conj(e2)).imag();
  collinear_ = std::abs(area) <= 1e-12 * std::abs(e1) * std::abs(e2);
}

Complex CubicConfig::centroid() const { return (roots_[0] + roots_[1] + roots_[2]) / 3.0; }

double CubicConfig::diameter() const {
  return std::max({std::abs(roots_[0] - roots_[1]), std::abs(roots_[0] - roots_[2]),
                   std::abs(roots_[1] - roots_[2])});
}

Complex CubicConfig::monic_value(Complex z) const {
  return (z - roots_[0]) * (z - roots_[1]) * (z - roots_[2]);
}

CubicConfig cubic_from_roots(Complex a1, Complex a2, Complex a3) {
  return CubicConfig(a1, a2, a3);
}

std::array<Complex, 2> quadratic_roots(Complex b, Complex c) {
  Complex d = std::sqrt(b * b - 4.0 * c);
  if ((std::conj(b) * d).real() < 0.0) d = -d;
  const Complex q = -0.5 * (b + d);
  if (q == 0.0) return {0.0, 0.0};
  return {q, c / q};
}

ShiftedCubic ShiftedCubic::from_coefficients(Complex v, Complex w, Complex shift) {
  if (w == 0.0) throw Error(ErrorCode::ZeroW, "w must be nonzero (repeated root at the origin)");
  ShiftedCubic sc;
  sc.v = v;
  sc.w = w;
  sc.shift = shift;
  return sc;
}

std::array<Complex, 2> ShiftedCubic::other_roots() const { return quadratic_roots(v, w); }

std::array<Complex, 3> ShiftedCubic::unshifted_roots() const {
  const auto r = other_roots();
  return {shift, r[0] + shift, r[1] + shift};
}

ShiftedCubic shift_to_root(const CubicConfig& c, std::size_t i) {
  if (i > 2) throw Error(ErrorCode::InvalidArgument, "root index must be 0, 1 or 2");
  const std::size_t j = (i + 1) % 3;
  const std::size_t k = (i + 2) % 3;
  const Complex bj = c.root(j) - c.root(i);
  const Complex bk = c.root(k) - c.root(i);
  ShiftedCubic sc;
  sc.v = -(bj + bk);
  sc.w = bj * bk;
  sc.origin = i;
  sc.shift = c.root(i);
  return sc;
}

LowDegreePoly LowDegreePoly::translated(Complex c) const {
  return {alpha, 2.0 * alpha * c + beta, (alpha * c + beta) * c + gamma};
}

LowDegreePoly LowDegreePoly::lame(const ShiftedCubic& sc) { return {1.5, sc.v, 0.5 * sc.w}; }

ConvexHull::ConvexHull(std::vector<Complex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() != 2 && vertices_.size() != 3) {
    throw Error(ErrorCode::InvalidArgument, "hull must be a segment or a triangle");
  }
}

Complex ConvexHull::centroid() const {
  Complex s = 0.0;
  for (const auto& p : vertices_) s += p;
  return s / static_cast<double>(vertices_.size());
}

double segment_distance(Complex z, Complex p, Complex q) {
  const Complex d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - p);
  const double t = std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (p + t * d));
}

double ConvexHull::distance(Complex z) const {
  if (is_segment()) return segment_distance(z, vertices_[0], vertices_[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < 3; ++e) {
    const Complex p = vertices_[e];
    const Complex q = vertices_[(e + 1) % 3];
    if (cross(q - p, z - p) < 0.0) inside = false;
    best = std::min(best, segment_distance(z, p, q));
  }
  return inside ? 0.0 : best;
}

ConvexHull convex_hull(const CubicConfig& c) {
  const auto& r = c.roots();
  if (c.collinear()) {
    std::size_t bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        if (std::abs(r[i] - r[j]) > best) {
          best = std::abs(r[i] - r[j]);
          bi = i;
          bj = j;
        }
      }
    }
    return ConvexHull({r[bi], r[bj]});
  }
  if (cross(r[1] - r[0], r[2] - r[0]) > 0.0) return ConvexHull({r[0], r[1], r[2]});
  return ConvexHull({r[0], r[2], r[1]});
}

bool in_hull_neighborhood(const ConvexHull& h, Complex z, double eps) {
  if (eps < 0.0) throw Error(ErrorCode::InvalidArgument, "eps must be non-negative");
  // Absorbs the rounding of the distance itself (e.g. |1.1 - 1| > 0.1 in double).
  const double slack = 1e-15 * std::max(1.0, std::abs(z));
  return h.distance(z) <= eps + slack;
}

}  // namespace heun
