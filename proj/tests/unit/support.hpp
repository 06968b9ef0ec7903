#pragma once

#include <complex>
#include <random>

#include "heun/error.hpp"

namespace test {

using C = std::complex<double>;

/// True iff f throws heun::Error carrying `code`.
template <class F>
bool throws_code(F&& f, heun::ErrorCode code) {
  try {
    f();
  } catch (const heun::Error& e) {
    return e.code() == code;
  }
  return false;
}

inline C random_point(std::mt19937_64& gen, double radius = 1.0) {
  std::uniform_real_distribution<double> d(-radius, radius);
  return {d(gen), d(gen)};
}

}  // namespace test
