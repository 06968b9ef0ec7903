#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

double segment_distance(C z, C p, C q) {
  const C d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - p);
  const double t = std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (p + t * d));
}

double cross(C a, C b) { return (std::conj(a) * b).imag(); }

}  // namespace

LC cofactor_determinant(const Matrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0L;
  if (n == 1) return a[0][0];
  LC det = 0.0L;
  for (std::size_t col = 0; col < n; ++col) {
    if (a[0][col] == LC(0.0L)) continue;
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<LC> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(a[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const LC term = a[0][col] * cofactor_determinant(minor);
    det += (col % 2 == 0) ? term : -term;
  }
  return det;
}

ReferenceEntries reference_entries(C v, C w, C alpha, C beta, C gamma, int n) {
  const LC V(v), W(w), A(alpha), B(beta), G(gamma);
  const long double nn = n;
  ReferenceEntries e;
  e.theta = nn * (nn - 1.0L + A);
  e.diag.assign(n + 2, 0.0L);
  e.upper.assign(n + 2, 0.0L);
  e.lower.assign(n + 2, 0.0L);
  for (int i = 1; i <= n + 1; ++i) {
    const long double a = n - i, b = n - i + 1, c = n - i + 2;
    e.diag[i] = -(V * a * b + B * b) / e.theta;
    if (i >= 2) {
      e.upper[i] = (a * b + A * b) / e.theta - 1.0L;
      e.lower[i] = (W * b * c + G * c) / e.theta;
    }
  }
  return e;
}

Matrix dense_matrix(const ReferenceEntries& e, LC lambda) {
  const std::size_t size = e.diag.size() - 1;
  Matrix m(size, std::vector<LC>(size, 0.0L));
  for (std::size_t j = 1; j <= size; ++j) {
    if (j >= 2) m[j - 1][j - 2] = e.lower[j];
    m[j - 1][j - 1] = lambda - e.diag[j];
    if (j < size) m[j - 1][j] = e.upper[j + 1];
  }
  return m;
}

PointResidual operator_at(C v, C w, C alpha, C beta, C gamma, LC theta, LC lambda,
                          const std::vector<LC>& u, LC z) {
  LC s = 0.0L, ds = 0.0L, d2s = 0.0L;
  long double m = 0.0L, dm = 0.0L, d2m = 0.0L;
  const long double r = std::abs(z);
  for (const LC& c : u) {
    d2s = d2s * z + 2.0L * ds;
    ds = ds * z + s;
    s = s * z + c;
    d2m = d2m * r + 2.0L * dm;
    dm = dm * r + m;
    m = m * r + std::abs(c);
  }
  const LC q = z * (z * (z + LC(v)) + LC(w));
  const LC p = (LC(alpha) * z + LC(beta)) * z + LC(gamma);
  const LC t1 = q * d2s, t2 = p * ds, t3 = -theta * (z - lambda) * s;
  return {t1 + t2 + t3, std::abs(q) * d2m + std::abs(p) * dm + std::abs(theta * (z - lambda)) * m};
}

C derivative(const std::function<C(C)>& f, C z, double h) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

C second_derivative(const std::function<C(C)>& f, C z, double h) {
  return (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
}

double partial_x(const std::function<double(C)>& f, C z, double h) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

double partial_y(const std::function<double(C)>& f, C z, double h) {
  const C ih(0.0, h);
  return (f(z + ih) - f(z - ih)) / (2.0 * h);
}

double monte_carlo_potential(C v, C w, C z, std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const C u = std::sqrt(w);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    const double theta = unit(gen);
    const C mid = -v * theta * theta;
    const C half = 2.0 * C(0.0, 1.0) * u * theta * std::sqrt(1.0 - theta * theta);
    sum += std::log(std::abs(z - (mid + half * std::cos(kPi * unit(gen)))));
  }
  return sum / static_cast<double>(samples);
}

double arcsine_potential(C e1, C e2, C z, int nodes) {
  const C mid = 0.5 * (e1 + e2), half = 0.5 * (e2 - e1);
  double sum = 0.0;
  // The density in phi is uniform on [0, pi]; the integrand is even and
  // 2 pi periodic, so equal spacing over the full circle is exponentially exact.
  for (int k = 0; k < nodes; ++k) {
    const double phi = 2.0 * kPi * (k + 0.5) / nodes;
    sum += std::log(std::abs(z - (mid + half * std::cos(phi))));
  }
  return sum / nodes;
}

std::pair<C, C> closed_form_foci(C v, C u) {
  const C zeta = v * v - 4.0 * u * u;
  const double xi = zeta.real(), eta = zeta.imag(), r = std::abs(zeta);
  const double re = std::sqrt(std::max(0.0, 0.5 * (r + xi)));
  const double im = std::copysign(std::sqrt(std::max(0.0, 0.5 * (r - xi))), eta);
  const C root(re, im);
  return {0.5 * (-v + root), 0.5 * (-v - root)};
}

double focal_sum(C z, C f1, C f2) { return std::abs(z - f1) + std::abs(z - f2); }

double elliptic_K_trapezoid(double m, int nodes) {
  // Integrand is even and pi periodic in phi: average over a full period.
  double sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double phi = kPi * (k + 0.5) / nodes;
    const double s = std::sin(phi);
    sum += 1.0 / std::sqrt(1.0 - m * s * s);
  }
  return 0.5 * kPi * sum / nodes;
}

double I_nu_substituted(double s, int nu) {
  // t = -1 + r^2 removes the endpoint singularity: dt / sqrt(t + 1) = 2 dr.
  auto f = [&](double r) {
    const double t = -1.0 + r * r;
    return 2.0 * std::pow(t, nu) / std::sqrt(t * t + s);
  };
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::sqrt(2.0), 20, 1e-14);
  return value / std::sqrt(2.0);
}

double hull_distance(const std::vector<C>& v, C z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::min(best, segment_distance(z, v[i], v[j]));
  }
  if (v.size() == 3) {
    const double s1 = cross(v[1] - v[0], z - v[0]);
    const double s2 = cross(v[2] - v[1], z - v[1]);
    const double s3 = cross(v[0] - v[2], z - v[2]);
    const bool inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
    if (inside && std::abs(cross(v[1] - v[0], v[2] - v[0])) > 0) return 0.0;
  }
  return best;
}

}  // namespace oracle
