#pragma once

// Run configuration shared by all subcommands. Values come from defaults, a
// flat key=value file and command-line flags, in increasing precedence; all
// three paths go through apply_setting so they parse identically.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heun/poly.hpp"
#include "heun/spectral.hpp"

namespace heun::cli {

struct RunConfig {
  std::array<Complex, 3> roots{Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(-0.5, 1.0)};
  std::optional<LowDegreePoly> p;  // global P; empty means P = Q'/2
  int n = 50;
  double tol = 1e-12;   // Aberth stopping tolerance
  double step = 0.0;    // Takemura arc step, 0 = automatic
  std::string out = "out";
  int threads = 1;
  std::uint64_t seed = 1;

  double s_min = 0.5;   // special: sampling interval and count
  double s_max = 10.0;
  int samples = 20;
  int points = 20;      // balayage / verify-ode exterior points per check
  std::vector<int> ns{25, 50, 100};  // balayage degrees
  bool overlay = false;  // takemura: overlay spectral roots of degree n

  CubicConfig cubic() const;
  PChoice p_choice() const;
  /// Throws heun::Error(InvalidArgument or DuplicateRoot).
  void validate() const;
  /// Key/value echo in the same syntax the config file accepts.
  std::map<std::string, std::string> describe() const;
};

/// "re,im".
Complex parse_complex(std::string_view text);
/// "a,b a,b a,b" for alpha, beta, gamma.
LowDegreePoly parse_p(std::string_view text);

/// Keys: q_roots, p, lame, n, tol, step, out, threads, seed, s_min, s_max,
/// samples, points, ns, overlay.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Blank lines and lines starting with '#' are skipped.
void apply_config_file(RunConfig& cfg, const std::string& path);

std::string format_double(double x);

}  // namespace heun::cli
