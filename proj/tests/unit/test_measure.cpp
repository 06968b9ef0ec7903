#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "heun/measure.hpp"
#include "oracles.hpp"
#include "support.hpp"

using heun::Complex;
using heun::CubicConfig;
using heun::ErrorCode;
using heun::LimitProfile;

namespace {

const Complex I(0.0, 1.0);
constexpr double kPi = 3.14159265358979323846;

double cross(Complex a, Complex b) { return (std::conj(a) * b).imag(); }

// Random profile from three random, well separated, non-collinear roots.
LimitProfile random_profile(std::mt19937_64& gen) {
  while (true) {
    const Complex b = test::random_point(gen, 2.0), c = test::random_point(gen, 2.0);
    if (std::abs(b) < 0.2 || std::abs(c) < 0.2 || std::abs(b - c) < 0.2) continue;
    if (std::abs(cross(b, c)) < 0.05 * std::abs(b) * std::abs(c)) continue;
    return LimitProfile(-(b + c), b * c);
  }
}

}  // namespace

TEST_CASE("limit profiles") {
  const LimitProfile p(-(1.0 + I), I);
  CHECK(std::abs(heun::xi(p, 1.0)) == 0.0);
  CHECK(std::abs(heun::xi(p, 0.0) - (1.0 + I)) < 1e-15);
  CHECK(std::abs(heun::xi(p, 0.5) - (1.0 + I) / 4.0) < 1e-15);
  CHECK(std::abs(heun::psi(p, 0.0)) == 0.0);
  CHECK(std::abs(heun::psi(p, 1.0)) == 0.0);
  CHECK(std::abs(heun::psi(p, 0.5) - (-3.0 * I / 16.0)) < 1e-15);
  CHECK(std::abs(p.u * p.u - p.w) < 1e-15);

  // |psi| peaks where (1 - tau)^2 = 1/2.
  const double peak = 1.0 - std::sqrt(0.5);
  double best = 0.0, arg = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    const double tau = k / 100000.0;
    const double val = std::abs(heun::psi(p, tau));
    if (val > best) best = val, arg = tau;
  }
  CHECK(arg == doctest::Approx(peak).epsilon(1e-4));
}

TEST_CASE("chords of the family") {
  const LimitProfile p(0.0, -0.25);
  CHECK(heun::segment_at(p, 1.0).degenerate());
  const auto s0 = heun::segment_at(LimitProfile(-(1.0 + I), I), 0.0);
  CHECK(s0.degenerate());
  CHECK(std::abs(s0.e1 - (1.0 + I)) < 1e-15);

  // theta^2 = 1/2: psi = 1/16, endpoints +-1/2 on the real axis.
  const auto s = heun::segment_at_theta(p, std::sqrt(0.5));
  CHECK(std::abs(s.midpoint()) < 1e-15);
  CHECK(std::abs(std::abs(s.half()) - 0.5) < 1e-15);
  CHECK(std::abs(s.half().imag()) < 1e-15);

  CHECK(std::abs(std::abs(heun::segment_direction(p).real()) - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(heun::segment_direction(LimitProfile(0.3, 1.0)).imag()) - 1.0) < 1e-15);
  const Complex d = heun::segment_direction(LimitProfile(0.0, I));
  CHECK(std::abs(cross(d, I * std::polar(1.0, kPi / 4.0))) < 1e-15);
  CHECK(test::throws_code([] { heun::segment_direction(LimitProfile(1.0, 0.0)); }, ErrorCode::ZeroW));
}

TEST_CASE("chords: midpoint formula, endpoints on the ellipse, common direction") {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 20; ++t) {
    const LimitProfile p = random_profile(gen);
    const auto e = heun::ellipse_geometry(p);
    const Complex dir = heun::segment_direction(p);
    const double scale = std::norm(p.v) + std::abs(p.w);
    for (int k = 0; k < 100; ++k) {
      const double tau = (k + 0.5) / 100.0;
      const auto s = heun::segment_at(p, tau);
      CHECK(std::abs(s.midpoint() - heun::xi(p, tau)) < 1e-14 * (1.0 + std::abs(p.v)));
      CHECK(std::abs(heun::ellipse_form_residual(e, s.e1)) < 1e-10 * scale * scale);
      CHECK(std::abs(heun::ellipse_form_residual(e, s.e2)) < 1e-10 * scale * scale);
      const Complex along = (s.e2 - s.e1) / std::abs(s.e2 - s.e1);
      CHECK(std::abs(cross(along, dir)) < 1e-12);
    }
  }
}

TEST_CASE("ellipse through the origin with foci 1 and i") {
  const auto e = heun::ellipse_geometry(LimitProfile(-(1.0 + I), I));
  CHECK(std::abs(e.center - Complex(0.5, 0.5)) < 1e-15);
  const bool order = std::abs(e.f1 - 1.0) < 1e-12 && std::abs(e.f2 - I) < 1e-12;
  const bool swapped = std::abs(e.f1 - I) < 1e-12 && std::abs(e.f2 - 1.0) < 1e-12;
  CHECK((order || swapped));
  CHECK(e.semi_major == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(heun::ellipse_form_residual(e, 0.0)) < 1e-15);
  CHECK(std::abs(heun::ellipse_form_residual(e, 1.0 + I)) < 1e-14);
  CHECK(heun::ellipse_form_residual(e, e.center) < 0.0);

  CHECK_FALSE(heun::is_strictly_outside(e, e.center, 0.0));
  CHECK(heun::is_strictly_outside(e, 10.0, 1.0));
  CHECK_FALSE(heun::is_strictly_outside(e, e.boundary(0.7), 1e-9));

  CHECK(test::throws_code([] { heun::ellipse_geometry(LimitProfile(0.0, -0.25)); },
                          ErrorCode::DegenerateEllipse));
}

TEST_CASE("ellipse geometry on random profiles") {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 100; ++t) {
    const LimitProfile p = random_profile(gen);
    const auto e = heun::ellipse_geometry(p);
    const auto others = heun::quadratic_roots(p.v, p.w);
    const double err = std::min(std::max(std::abs(e.f1 - others[0]), std::abs(e.f2 - others[1])),
                                std::max(std::abs(e.f1 - others[1]), std::abs(e.f2 - others[0])));
    CHECK(err < 1e-10);

    const auto [g1, g2] = oracle::closed_form_foci(p.v, p.u);
    const double err2 = std::min(std::max(std::abs(e.f1 - g1), std::abs(e.f2 - g2)),
                                 std::max(std::abs(e.f1 - g2), std::abs(e.f2 - g1)));
    CHECK(err2 < 1e-10);

    // Focal sum along the boundary, and the origin lies on the ellipse.
    const double two_a = 2.0 * e.semi_major;
    for (int k = 0; k < 100; ++k) {
      const Complex z = e.boundary(kPi * k / 100.0);
      CHECK(oracle::focal_sum(z, e.f1, e.f2) == doctest::Approx(two_a).epsilon(1e-9));
      CHECK(std::abs(heun::ellipse_form_residual(e, z)) < 1e-10 * (1.0 + e.iota * e.iota));
    }
    CHECK(oracle::focal_sum(0.0, e.f1, e.f2) == doctest::Approx(two_a).epsilon(1e-12));

    CHECK(std::abs(e.f1 - e.center) == doctest::Approx(e.eccentricity).epsilon(1e-10));
    CHECK(std::abs(e.f2 - e.center) == doctest::Approx(e.eccentricity).epsilon(1e-10));
    CHECK(e.semi_major * e.semi_major ==
          doctest::Approx(e.semi_minor * e.semi_minor + e.eccentricity * e.eccentricity).epsilon(1e-10));
    CHECK(std::abs(e.center - Complex(e.A / 2.0, e.C / 2.0)) < 1e-14 * (1.0 + std::abs(e.center)));

    const double bcad = e.B * e.C - e.A * e.D;
    CHECK(e.delta == doctest::Approx(4.0 * bcad * bcad).epsilon(1e-10));
    CHECK(e.Delta == doctest::Approx(-4.0 * std::pow(bcad, 4)).epsilon(1e-10));
    CHECK(e.Delta < 0.0);
    CHECK(e.iota == doctest::Approx(e.a11 + e.a22));
    // The quadratic part has eigenvalues 4 a^2 and 4 b^2.
    const double disc = std::sqrt(e.iota * e.iota - 4.0 * e.delta);
    CHECK(0.5 * (e.iota + disc) == doctest::Approx(4.0 * e.semi_major * e.semi_major).epsilon(1e-9));
    CHECK(0.5 * (e.iota - disc) == doctest::Approx(4.0 * e.semi_minor * e.semi_minor).epsilon(1e-7));

    // Center and foci on one line.
    CHECK(std::abs(cross(e.f1 - e.center, e.f2 - e.center)) < 1e-9);

    // Both boundary points of the parametrisation satisfy the form.
    for (const double phi : {-1.2, -0.3, 0.0, 0.4, 1.5}) {
      for (const Complex z : heun::gamma_param(p, phi)) {
        CHECK(std::abs(heun::ellipse_form_residual(e, z)) < 1e-12 * (1.0 + e.iota * e.iota));
      }
    }
  }
  const auto ends = heun::gamma_param(LimitProfile(-(1.0 + I), I), kPi / 2.0);
  CHECK(std::abs(ends[0] - (1.0 + I)) < 1e-15);
  CHECK(std::abs(heun::gamma_param(LimitProfile(0.5, I), 0.0)[1]) == 0.0);
}

TEST_CASE("flipping the square root of w changes nothing") {
  std::mt19937_64 gen(29);
  for (int t = 0; t < 500; ++t) {
    LimitProfile p = random_profile(gen);
    const auto e = heun::ellipse_geometry(p);
    p.u = -p.u;
    const auto f = heun::ellipse_geometry(p);
    const double s = 1e-12 * (1.0 + e.iota * e.iota);
    CHECK(std::abs(e.a11 - f.a11) <= s);
    CHECK(std::abs(e.a12 - f.a12) <= s);
    CHECK(std::abs(e.a22 - f.a22) <= s);
    CHECK(std::abs(e.a13 - f.a13) <= s);
    CHECK(std::abs(e.a23 - f.a23) <= s);
    CHECK(std::abs(e.center - f.center) <= 1e-14);
    CHECK(std::abs(e.semi_major - f.semi_major) <= 1e-14);
    CHECK(std::abs(e.semi_minor - f.semi_minor) <= 1e-12);
    CHECK(std::abs(e.eccentricity - f.eccentricity) <= 1e-14);
    const bool same = std::abs(e.f1 - f.f1) < 1e-12 && std::abs(e.f2 - f.f2) < 1e-12;
    const bool swapped = std::abs(e.f1 - f.f2) < 1e-12 && std::abs(e.f2 - f.f1) < 1e-12;
    CHECK((same || swapped));
  }
}

TEST_CASE("the three ellipses of the reference cubic") {
  const CubicConfig c(0.0, 1.0, Complex(-0.5, 1.0));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto sc = heun::shift_to_root(c, i);
    const auto e = heun::ellipse_geometry(LimitProfile(sc));
    CHECK(std::abs(heun::ellipse_form_residual(e, 0.0)) < 1e-15);
    const auto o = sc.other_roots();
    const double two_a = 2.0 * e.semi_major;
    CHECK(oracle::focal_sum(0.0, o[0], o[1]) == doctest::Approx(two_a).epsilon(1e-12));
  }
  const auto e1 = heun::ellipse_geometry(LimitProfile(heun::shift_to_root(c, 0)));
  CHECK(e1.semi_major == doctest::Approx(1.05902).epsilon(1e-5));
  CHECK(e1.semi_minor == doctest::Approx(0.555893).epsilon(1e-5));
}

TEST_CASE("collinearity and the degenerate ellipse") {
  // Collinear: only the frame of the middle root degenerates.
  const CubicConfig line(Complex(-1.0, -0.5), Complex(0.2, 0.1), Complex(2.0, 1.0));
  REQUIRE(line.collinear());
  for (std::size_t i = 0; i < 3; ++i) {
    const LimitProfile p(heun::shift_to_root(line, i));
    if (i == 1) {
      CHECK(std::abs(heun::degeneracy(p)) < 1e-14);
      CHECK(test::throws_code([&] { heun::ellipse_geometry(p); }, ErrorCode::DegenerateEllipse));
      const heun::SupportRegion reg(p);
      CHECK(reg.degenerate());
      CHECK(reg.outside(Complex(0.0, 1.0), 1e-3));
      CHECK_FALSE(reg.outside(0.5 * (reg.segment().e1 + reg.segment().e2), 1e-3));
    } else {
      CHECK(std::abs(heun::degeneracy(p)) > 1e-3);
    }
  }
  // Non-collinear: no frame degenerates.
  std::mt19937_64 gen(31);
  for (int t = 0; t < 200; ++t) {
    const CubicConfig c(test::random_point(gen), test::random_point(gen), test::random_point(gen));
    if (c.collinear()) continue;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(heun::degeneracy(LimitProfile(heun::shift_to_root(c, i))) != 0.0);
    }
  }
}

TEST_CASE("distance to the boundary") {
  const auto e = heun::ellipse_geometry(LimitProfile(-(1.0 + I), I));
  for (const Complex z : {Complex(3.0, 0.0), Complex(0.5, 0.5), Complex(-1.0, 2.0)}) {
    double brute = INFINITY;
    for (int k = 0; k < 200000; ++k) brute = std::min(brute, std::abs(e.boundary(kPi * k / 200000.0) - z));
    CHECK(e.boundary_distance(z) == doctest::Approx(brute).epsilon(1e-6));
  }
}
