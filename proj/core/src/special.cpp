#include "heun/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "heun/error.hpp"

namespace heun {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Triple {
  double v, d1, d2;

  Triple& operator+=(const Triple& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Triple operator-(const Triple& o) const { return {v - o.v, d1 - o.d1, d2 - o.d2}; }
  double norm_inf() const { return std::max({std::abs(v), std::abs(d1), std::abs(d2)}); }
};
Triple operator*(double s, const Triple& t) { return {s * t.v, s * t.d1, s * t.d2}; }
Triple operator*(const Triple& t, double s) { return s * t; }

}  // namespace

SpecialIntegral I_nu_special(double s, int nu, const QuadratureOptions& opts) {
  if (!(s > 0.0)) throw Error(ErrorCode::DivergentIntegral, "I_nu(s) diverges for s <= 0");
  if (nu < 0) throw Error(ErrorCode::InvalidArgument, "nu must be non-negative");
  // With t = -cos 2chi: dt / (sqrt 2 sqrt(t+1)) = 2 cos(chi) dchi.
  auto f = [&](double chi) {
    const double t = -std::cos(2.0 * chi);
    const double c = std::cos(chi);
    const double q = t * t + s;
    const double r = 1.0 / std::sqrt(q);
    const double tn = std::pow(t, nu);
    return Triple{2.0 * tn * c * r, -tn * c * r * r * r, 1.5 * tn * c * r * r * r * r * r};
  };
  // The integrand peaks at t = 0 (chi = pi/4) with width sqrt(s); splitting
  // there keeps the peak on a panel edge.
  const double mid = 0.25 * kPi;
  const Triple a = integrate(f, 0.0, mid, opts).value;
  const Triple b = integrate(f, mid, 0.5 * kPi, opts).value;
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

double SpecialRelations::max_abs() const {
  return std::max({std::abs(rec0), std::abs(rec1), std::abs(two), std::abs(three), std::abs(der1)});
}

SpecialRelations check_special_relations(double s, const QuadratureOptions& opts) {
  std::array<SpecialIntegral, 4> I{};
  for (int nu = 0; nu < 4; ++nu) I[nu] = I_nu_special(s, nu, opts);
  const double edge = 1.0 / (2.0 * std::sqrt(1.0 + s));
  SpecialRelations r{};
  r.rec0 = I[2].ds + 0.5 * I[0].value + s * I[0].ds;
  r.rec1 = I[3].ds + 0.5 * I[1].value + s * I[1].ds;
  r.two = I[2].ds + I[1].ds + 0.25 * I[0].value - edge;
  r.three = I[3].ds - I[1].ds + 0.75 * I[1].value + 0.25 * I[0].value;
  r.der1 = I[1].ds - s * I[0].ds - 0.25 * I[0].value - edge;
  return r;
}

double special_ode_residual(double s, double k, const QuadratureOptions& opts) {
  const SpecialIntegral I = I_nu_special(s, 0, opts);
  return 16.0 * s * (1.0 + s) * I.ds2 + 16.0 * (1.0 + 2.0 * s) * I.ds + k * I.value +
         2.0 / std::sqrt(1.0 + s);
}

std::vector<SpecialOdeRow> solve_special_ode(double s0, double s1, int samples,
                                             const SpecialOdeOptions& opts) {
  if (!(s0 > 0.0) || !(s1 > s0)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < s0 < s1");
  }
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;

  auto rhs = [](const State& y, State& dy, double s) {
    dy[0] = y[1];
    dy[1] = (-2.0 / std::sqrt(1.0 + s) - 3.0 * y[0] - 16.0 * (1.0 + 2.0 * s) * y[1]) /
            (16.0 * s * (1.0 + s));
  };
  const SpecialIntegral start = I_nu_special(s0, 0, opts.quad);
  State y{start.value, start.ds};
  auto stepper =
      odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());

  std::vector<SpecialOdeRow> rows;
  rows.reserve(samples);
  double s = s0;
  double dt = 1e-3 * (s1 - s0);
  for (int k = 0; k < samples; ++k) {
    const double target = s0 + (s1 - s0) * k / (samples - 1);
    while (s < target) {
      double step = std::min(dt, target - s);
      const double before = step;
      if (stepper.try_step(rhs, y, s, step) == odeint::success) {
        // On success s and step were advanced; keep the suggested size unless
        // it was clipped by the sample point.
        if (before == dt) dt = step;
      } else {
        dt = step;
        if (dt < 1e-14 * std::max(1.0, s)) {
          throw Error(ErrorCode::StepSizeUnderflow, "step size underflow near s = " +
                                                        std::to_string(s));
        }
      }
    }
    rows.push_back({target, y[0], I_nu_special(target, 0, opts.quad).value});
  }
  return rows;
}

double elliptic_K(double m) {
  if (!(m < 1.0)) throw Error(ErrorCode::InvalidArgument, "K(m) requires m < 1");
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

double y1(double s, EllipticConvention convention) {
  if (!(s > -1.0)) throw Error(ErrorCode::InvalidArgument, "y1 needs s > -1");
  const double r = std::sqrt(1.0 + s);
  const double x = (r - 1.0) / (2.0 * r);
  const double m = convention == EllipticConvention::Parameter ? x : x * x;
  return 2.0 / (kPi * std::sqrt(r)) * elliptic_K(m);
}

double y1_homogeneous_check(double s, EllipticConvention convention) {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be positive");
  // Fourth-order stencils: truncation ~ h^4, rounding ~ eps / h^2.
  const double h = 1e-2 * s;
  const double fm2 = y1(s - 2 * h, convention), fm1 = y1(s - h, convention);
  const double f0 = y1(s, convention);
  const double fp1 = y1(s + h, convention), fp2 = y1(s + 2 * h, convention);
  const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
  return 16.0 * s * (1.0 + s) * d2 + 16.0 * (1.0 + 2.0 * s) * d1 + 3.0 * f0;
}

}  // namespace heun
