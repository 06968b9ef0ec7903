#include "heun/measure.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "heun/error.hpp"

namespace heun {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

LimitProfile::LimitProfile(Complex v_, Complex w_) : v(v_), w(w_), u(std::sqrt(w_)) {}

Complex xi(const LimitProfile& p, double tau) {
  const double th = 1.0 - tau;
  return -p.v * (th * th);
}

Complex psi(const LimitProfile& p, double tau) {
  const double th2 = (1.0 - tau) * (1.0 - tau);
  return -p.w * ((1.0 - th2) * th2);
}

ComplexSegment segment_at_theta(const LimitProfile& p, double theta) {
  const Complex mid = -p.v * (theta * theta);
  const double s = std::sqrt(std::max(0.0, 1.0 - theta * theta));
  const Complex half = Complex(0.0, 2.0) * p.u * (theta * s);
  return {mid - half, mid + half};
}

ComplexSegment segment_at(const LimitProfile& p, double tau) {
  return segment_at_theta(p, 1.0 - tau);
}

Complex segment_direction(const LimitProfile& p) {
  if (p.w == 0.0) throw Error(ErrorCode::ZeroW, "w = 0 leaves the chord direction undefined");
  const Complex d = Complex(0.0, 1.0) * p.u;
  return d / std::abs(d);
}

double degeneracy(const LimitProfile& p) { return (p.v * std::conj(p.u)).real(); }

double EllipseGeometry::form(Complex z) const {
  const double x = z.real(), y = z.imag();
  return a11 * x * x + 2.0 * a12 * x * y + a22 * y * y + 2.0 * a13 * x + 2.0 * a23 * y;
}

Complex EllipseGeometry::boundary(double phi) const {
  const double s = std::sin(phi);
  return -profile.v * (s * s) + Complex(0.0, 1.0) * profile.u * std::sin(2.0 * phi);
}

double EllipseGeometry::boundary_distance(Complex z) const {
  constexpr int kSamples = 512;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kSamples; ++k) {
    const double d = std::abs(boundary(kPi * k / kSamples) - z);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  const double h = kPi / kSamples;
  const double centre = kPi * best / kSamples;
  auto f = [&](double phi) { return std::abs(boundary(phi) - z); };
  const auto r = boost::math::tools::brent_find_minima(f, centre - h, centre + h, 52);
  return std::min(best_d, r.second);
}

EllipseGeometry ellipse_geometry(const LimitProfile& p) {
  const double bcad = degeneracy(p);
  if (std::abs(bcad) <= 1e-12 * std::abs(p.v) * std::abs(p.u)) {
    throw Error(ErrorCode::DegenerateEllipse,
                "BC - AD vanishes: the nonzero roots are collinear with the origin between them");
  }
  const double A = -p.v.real(), B = -p.u.imag(), C = -p.v.imag(), D = p.u.real();
  const double a11 = C * C + 4.0 * D * D;
  const double a12 = -(A * C + 4.0 * B * D);
  const double a22 = A * A + 4.0 * B * B;
  const double a13 = 2.0 * D * bcad;
  const double a23 = -2.0 * B * bcad;

  const double delta = a11 * a22 - a12 * a12;
  const double Delta = 2.0 * a12 * a13 * a23 - a11 * a23 * a23 - a22 * a13 * a13;
  const double iota = a11 + a22;
  // (A - 2D)^2 + (C + 2B)^2 and its partner; their product is iota^2 - 4 delta.
  const double g1 = (A - 2.0 * D) * (A - 2.0 * D) + (C + 2.0 * B) * (C + 2.0 * B);
  const double g2 = (A + 2.0 * D) * (A + 2.0 * D) + (C - 2.0 * B) * (C - 2.0 * B);
  const double root = std::sqrt(g1 * g2);
  // Eigenvalues of the quadratic part are 4a^2 and 4b^2, since the constant
  // of the centred form is -Delta / delta = (BC - AD)^2 = delta / 4.
  const double semi_major = 0.5 * std::sqrt(0.5 * (iota + root));
  const double semi_minor = 0.5 * std::sqrt(std::max(0.0, 0.5 * (iota - root)));
  const double ecc = 0.5 * std::sqrt(root);

  const auto foci = quadratic_roots(p.v, p.w);
  return EllipseGeometry{a11,
                         a12,
                         a22,
                         a13,
                         a23,
                         A,
                         B,
                         C,
                         D,
                         Complex(0.5 * A, 0.5 * C),
                         semi_major,
                         semi_minor,
                         ecc,
                         foci[0],
                         foci[1],
                         Delta,
                         delta,
                         iota,
                         p};
}

std::array<Complex, 2> gamma_param(const LimitProfile& p, double phi) {
  const double s = std::sin(phi);
  const Complex mid = -p.v * (s * s);
  const Complex off = Complex(0.0, 1.0) * p.u * std::sin(2.0 * phi);
  return {mid + off, mid - off};
}

double ellipse_form_residual(const EllipseGeometry& e, Complex z) { return e.form(z); }

bool is_strictly_outside(const EllipseGeometry& e, Complex z, double margin) {
  const double fz = e.form(z);
  const double fc = e.form(e.center);
  if (fz == 0.0 || (fz > 0.0) == (fc > 0.0)) return false;
  return e.boundary_distance(z) >= margin;
}

SupportRegion::SupportRegion(const LimitProfile& p) : degenerate_(false) {
  const auto r = quadratic_roots(p.v, p.w);
  segment_ = {r[0], r[1]};
  try {
    ellipse_ = ellipse_geometry(p);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateEllipse) throw;
    degenerate_ = true;
  }
}

const EllipseGeometry& SupportRegion::ellipse() const {
  if (!ellipse_) throw Error(ErrorCode::DegenerateEllipse, "support is a segment");
  return *ellipse_;
}

bool SupportRegion::outside(Complex z, double margin) const {
  if (!degenerate_) return is_strictly_outside(*ellipse_, z, margin);
  const double d = segment_distance(z, segment_.e1, segment_.e2);
  return d > 0.0 && d >= margin;
}

}  // namespace heun
