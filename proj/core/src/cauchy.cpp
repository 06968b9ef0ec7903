#include "heun/cauchy.hpp"

#include <algorithm>
#include <cmath>

#include "heun/error.hpp"

namespace heun {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

// Integrand bundle for C, C', C''.
struct Jet {
  Complex c0, c1, c2;

  Jet& operator+=(const Jet& o) {
    c0 += o.c0;
    c1 += o.c1;
    c2 += o.c2;
    return *this;
  }
  Jet operator-(const Jet& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  double norm_inf() const { return std::max({std::abs(c0), std::abs(c1), std::abs(c2)}); }
};
Jet operator*(double s, const Jet& j) { return {s * j.c0, s * j.c1, s * j.c2}; }
Jet operator*(const Jet& j, double s) { return s * j; }

// Value and s-derivative integrands of I_nu.
struct Pair {
  Complex value, ds;

  Pair& operator+=(const Pair& o) {
    value += o.value;
    ds += o.ds;
    return *this;
  }
  Pair operator-(const Pair& o) const { return {value - o.value, ds - o.ds}; }
  double norm_inf() const { return std::max(std::abs(value), std::abs(ds)); }
};
Pair operator*(double s, const Pair& p) { return {s * p.value, s * p.ds}; }
Pair operator*(const Pair& p, double s) { return s * p; }

}  // namespace

Complex cauchy_arcsine(const ComplexSegment& seg, Complex z) {
  const Complex m = seg.midpoint();
  const Complex h = seg.half();
  if (h == 0.0) {
    if (z == m) throw Error(ErrorCode::OnSupport, "point coincides with a point mass");
    return 1.0 / (z - m);
  }
  const double scale = std::max({1.0, std::abs(z), std::abs(m) + std::abs(h)});
  if (segment_distance(z, seg.e1, seg.e2) <= 1e-15 * scale) {
    throw Error(ErrorCode::OnSupport, "point lies on the segment");
  }
  const Complex zeta = (z - m) / h;
  return 1.0 / (h * std::sqrt(zeta - 1.0) * std::sqrt(zeta + 1.0));
}

double log_potential_arcsine(const ComplexSegment& seg, Complex z) {
  const Complex r = cauchy_arcsine(seg, z);
  return std::log(std::abs(0.5 * (z - seg.midpoint() + 1.0 / r)));
}

void require_outside(const LimitProfile& p, Complex z, double margin) {
  if (!SupportRegion(p).outside(z, margin)) {
    throw Error(ErrorCode::OnOrInsideSupport, "point is not strictly outside the support");
  }
}

Complex cauchy_M(const LimitProfile& p, Complex z, const CauchyOptions& opts) {
  require_outside(p, z, opts.margin);
  auto f = [&](double theta) { return cauchy_arcsine(segment_at_theta(p, theta), z); };
  return integrate(f, 0.0, 1.0, opts.quad).value;
}

TransformSample cauchy_M_derivatives(const LimitProfile& p, Complex z,
                                     const CauchyOptions& opts) {
  require_outside(p, z, opts.margin);
  auto f = [&](double theta) {
    const Complex r = cauchy_arcsine(segment_at_theta(p, theta), z);
    const Complex dR = 2.0 * p.v * (theta * theta) + 2.0 * z;
    const Complex r3 = r * r * r;
    return Jet{r, -0.5 * r3 * dR, 0.75 * r3 * r * r * dR * dR - r3};
  };
  const Jet j = integrate(f, 0.0, 1.0, opts.quad).value;
  return {z, j.c0, j.c1, j.c2, 0.0};
}

TransformSample heun_ode_residual(const ShiftedCubic& sc, Complex z,
                                  const HeunCoefficients& coeffs, const CauchyOptions& opts) {
  TransformSample t = cauchy_M_derivatives(LimitProfile(sc), z, opts);
  t.residual = sc.q(z) * t.d2C + sc.dq(z) * t.dC + coeffs.c2 * sc.d2q(z) * t.C +
               coeffs.c3 * ShiftedCubic::d3q();
  return t;
}

double log_potential_M(const LimitProfile& p, Complex z, const CauchyOptions& opts) {
  require_outside(p, z, opts.margin);
  auto f = [&](double theta) { return log_potential_arcsine(segment_at_theta(p, theta), z); };
  return integrate(f, 0.0, 1.0, opts.quad).value;
}

SpecialCaseVars special_case_vars(const ShiftedCubic& sc, Complex z) {
  const Complex a = sc.v * sc.v - 4.0 * sc.w;
  if (a == 0.0) throw Error(ErrorCode::ResonantCubic, "v^2 - 4w vanishes");
  return {-16.0 * sc.w * (z * z + sc.v * z + sc.w) / (a * a), sc.v * (sc.v + 2.0 * z) / a, a};
}

GeneralIntegral I_nu_general(const ShiftedCubic& sc, Complex z, int nu,
                             const CauchyOptions& opts) {
  if (nu < 0) throw Error(ErrorCode::InvalidArgument, "nu must be non-negative");
  const SpecialCaseVars vars = special_case_vars(sc, z);
  const LimitProfile p(sc);
  require_outside(p, z, opts.margin);
  auto f = [&](double chi) {
    const double theta = std::sin(chi);
    const double c = std::cos(chi);
    const Complex r = cauchy_arcsine(segment_at_theta(p, theta), z);
    const Complex base = std::pow(2.0 * theta * theta - 1.0 + vars.u, nu);
    return Pair{base * c * r, -(vars.a / 8.0) * base * c * r * r * r};
  };
  const Pair res = integrate(f, 0.0, kHalfPi, opts.quad).value;
  return {res.value, res.ds};
}

double GeneralRelations::max_abs() const {
  return std::max({std::abs(rec0), std::abs(rec1), std::abs(two), std::abs(three)});
}

GeneralRelations check_general_relations(const ShiftedCubic& sc, Complex z,
                                         const CauchyOptions& opts) {
  const SpecialCaseVars vars = special_case_vars(sc, z);
  GeneralIntegral I[4];
  for (int nu = 0; nu < 4; ++nu) I[nu] = I_nu_general(sc, z, nu, opts);
  const Complex s = vars.s, u = vars.u;
  const Complex B = 1.0 / (4.0 * (z + sc.v));
  GeneralRelations r;
  r.rec0 = I[2].ds - (-0.5 * I[0].value - s * I[0].ds);
  r.rec1 = I[3].ds - (-0.5 * I[1].value - s * I[1].ds);
  r.two = (I[2].ds + I[1].ds) - (u * I[1].ds - 0.25 * I[0].value + B);
  r.three = (I[3].ds - I[1].ds) - ((u * u - 2.0 * u) * I[1].ds - 0.75 * I[1].value +
                                    0.25 * (u - 1.0) * I[0].value + 2.0 * u * B);
  return r;
}

std::vector<TransformDeviation> compare_transforms(const EmpiricalMeasure& mu,
                                                   const ShiftedCubic& sc,
                                                   const std::vector<Complex>& points,
                                                   const CauchyOptions& opts) {
  const LimitProfile p(sc);
  const SupportRegion region(p);
  std::vector<TransformDeviation> out;
  out.reserve(points.size());
  for (const Complex z : points) {
    const Complex zs = z - sc.shift;
    if (!region.outside(zs, opts.margin)) {
      throw Error(ErrorCode::PointInsideEllipse, "comparison point is not outside the ellipse");
    }
    const Complex cm = cauchy_M(p, zs, opts);
    const double pm = log_potential_M(p, zs, opts);
    out.push_back({z, std::abs(cauchy_transform_empirical(mu, z) - cm),
                   std::abs(log_potential_empirical(mu, z) - pm)});
  }
  return out;
}

}  // namespace heun
