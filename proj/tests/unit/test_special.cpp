#include <chrono>
#include <cmath>

#include "doctest.h"
#include "heun/cauchy.hpp"
#include "heun/special.hpp"
#include "oracles.hpp"
#include "support.hpp"

using heun::ErrorCode;

TEST_CASE("I_nu values against an independent quadrature") {
  for (const double s : {0.01, 0.5, 1.0, 2.0, 10.0}) {
    for (int nu = 0; nu <= 3; ++nu) {
      CHECK(heun::I_nu_special(s, nu).value ==
            doctest::Approx(oracle::I_nu_substituted(s, nu)).epsilon(1e-11));
    }
  }
  const double big = 1e6;
  CHECK(heun::I_nu_special(big, 0).value * std::sqrt(big) / 2.0 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(heun::I_nu_special(1.0, 1).value) < heun::I_nu_special(1.0, 0).value);

  double prev = heun::I_nu_special(0.05, 0).value;
  for (double s = 0.1; s <= 20.0; s *= 1.5) {
    const double cur = heun::I_nu_special(s, 0).value;
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK(test::throws_code([] { heun::I_nu_special(0.0, 0); }, ErrorCode::DivergentIntegral));
  CHECK(test::throws_code([] { heun::I_nu_special(-1.0, 2); }, ErrorCode::DivergentIntegral));
}

TEST_CASE("s-derivatives match finite differences") {
  const double s = 1.3;
  const double h = 1e-4;
  auto I0 = [](double x) { return heun::I_nu_special(x, 0).value; };
  const auto r = heun::I_nu_special(s, 0);
  CHECK(r.ds == doctest::Approx((I0(s + h) - I0(s - h)) / (2 * h)).epsilon(1e-7));
  CHECK(r.ds2 == doctest::Approx((I0(s + h) - 2 * I0(s) + I0(s - h)) / (h * h)).epsilon(1e-5));
}

TEST_CASE("relations among I_0..I_3") {
  const auto at1 = heun::check_special_relations(1.0);
  CHECK(std::abs(at1.rec0) < 1e-9);
  CHECK(std::abs(at1.rec1) < 1e-9);
  CHECK(std::abs(at1.two) < 1e-9);
  CHECK(std::abs(at1.three) < 1e-9);
  CHECK(std::abs(at1.der1) < 1e-9);
  CHECK(heun::check_special_relations(0.01).max_abs() < 1e-6);
  for (const double s : {0.5, 2.0, 5.0, 10.0}) CHECK(heun::check_special_relations(s).max_abs() < 1e-8);
}

TEST_CASE("second-order equation for I_0") {
  for (const double s : {0.5, 1.0, 2.0, 5.0, 10.0}) CHECK(std::abs(heun::special_ode_residual(s)) < 1e-8);
  CHECK(std::abs(heun::special_ode_residual(1.0, 4.0)) > 1e-2);

  // Same equation in the z variable: s = 4 z^2 - 1 at z = 1.5.
  const auto sc = heun::shift_to_root(heun::CubicConfig(0.0, 0.5, -0.5), 0);
  CHECK(std::abs(heun::heun_ode_residual(sc, 1.5).residual) < 1e-8);
  CHECK(std::abs(heun::special_ode_residual(8.0)) < 1e-8);
  CHECK(heun::cauchy_M(heun::LimitProfile(sc), 1.5).real() ==
        doctest::Approx(heun::I_nu_special(8.0, 0).value).epsilon(1e-11));
}

TEST_CASE("initial-value integration reproduces the quadrature curve") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = heun::solve_special_ode(0.5, 10.0, 20);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(rows.size() == 20);
  CHECK(rows.front().s == doctest::Approx(0.5));
  CHECK(rows.back().s == doctest::Approx(10.0));
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows[i].ode - rows[i].quadrature));
    CHECK(rows[i].quadrature == doctest::Approx(oracle::I_nu_substituted(rows[i].s, 0)).epsilon(1e-11));
    if (i > 0) CHECK(rows[i].ode < rows[i - 1].ode);
  }
  CHECK(worst < 1e-6);
  CHECK(secs < 5.0);

  CHECK(heun::I_nu_special(1e-6, 0).value > heun::I_nu_special(1e-2, 0).value + 1.0);
}

TEST_CASE("complete elliptic integral and the homogeneous solution") {
  CHECK(heun::elliptic_K(0.5) == doctest::Approx(oracle::elliptic_K_trapezoid(0.5)).epsilon(1e-12));
  CHECK(heun::elliptic_K(0.5) == doctest::Approx(std::comp_ellint_1(std::sqrt(0.5))).epsilon(1e-12));
  CHECK(heun::elliptic_K(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-15));
  for (const double m : {0.1, 0.9, 0.999}) {
    CHECK(heun::elliptic_K(m) == doctest::Approx(std::comp_ellint_1(std::sqrt(m))).epsilon(1e-12));
  }

  using heun::EllipticConvention;
  CHECK(std::abs(heun::y1_homogeneous_check(1.0, EllipticConvention::Parameter)) < 1e-5);
  CHECK(std::abs(heun::y1_homogeneous_check(1.0, EllipticConvention::Modulus)) > 1e-2);
  CHECK(std::abs(heun::y1_homogeneous_check(4.0)) < 1e-5);

  // Large s: y1 s^(1/4) approaches (2/pi) K(1/2); y1 decreases.
  const double limit = 2.0 / M_PI * heun::elliptic_K(0.5);
  CHECK(heun::y1(1e8) * std::pow(1e8, 0.25) == doctest::Approx(limit).epsilon(1e-3));
  CHECK(heun::y1(100.0) < heun::y1(10.0));
}
