#pragma once

// Extended-precision scalar used wherever the spectral problem is
// ill-conditioned. The tridiagonal pencil is far from normal, so roots of
// the spectral polynomial move by O(1e-4) at n = 50 (and O(0.1) at n = 100)
// under double-precision rounding of the matrix entries. Quad precision
// keeps those perturbations below 1e-15 for the sizes this library targets.

#include <complex>

#include <boost/multiprecision/float128.hpp>

namespace heun {

using Quad = boost::multiprecision::float128;
using QComplex = std::complex<Quad>;
using Complex = std::complex<double>;

inline QComplex to_quad(Complex z) { return {Quad(z.real()), Quad(z.imag())}; }

inline Complex to_double(const QComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace heun
