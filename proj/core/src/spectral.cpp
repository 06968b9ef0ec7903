#include "heun/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "heun/error.hpp"

namespace heun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kEquilibriumSteps = 8;
constexpr double kEquilibriumTol = 1e-20;

Quad qabs(const QComplex& z) { return abs(z); }

// Rescales a pair sharing one exponent when the leading value drifts far
// from unity. Quad has a wide exponent range, so this fires rarely.
void rebalance(QComplex& a, QComplex& b, long& exponent) {
  const Quad mag = std::max(qabs(a), qabs(b));
  if (mag == 0 || (mag < Quad(1e60) && mag > Quad(1e-60))) return;
  int e = 0;
  boost::multiprecision::frexp(mag, &e);
  const Quad f = boost::multiprecision::ldexp(Quad(1), -e);
  a *= f;
  b *= f;
  exponent += e;
}

struct RatioState {
  QComplex value;
  QComplex derivative;
  // Same recurrence run on absolute values; bounds the rounding error of value.
  Quad bound;
};

// Sp_n and Sp_n' together, sharing a single scale factor.
RatioState sp_with_derivative(const SpectralMatrix& m, const QComplex& lambda) {
  const auto& d = m.diagonal();
  QComplex p2(0), p1(1);   // Sp_{i-2}, Sp_{i-1}
  QComplex q2(0), q1(0);   // derivatives
  Quad g2 = 0, g1 = 1;
  for (std::size_t i = 1; i <= m.size(); ++i) {
    const QComplex shift = lambda - d[i - 1];
    QComplex p, q;
    Quad g;
    if (i == 1) {
      p = shift * p1;
      q = p1 + shift * q1;
      g = qabs(shift) * g1;
    } else {
      const QComplex psi = m.psi(i);
      p = shift * p1 - psi * p2;
      q = p1 + shift * q1 - psi * q2;
      g = qabs(shift) * g1 + qabs(psi) * g2;
    }
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
    g2 = g1;
    g1 = g;
    const Quad mag = std::max({qabs(q1), qabs(q2), g1, g2});
    if (mag > Quad(1e60) || (mag < Quad(1e-60) && mag > 0)) {
      int e = 0;
      boost::multiprecision::frexp(mag, &e);
      const Quad f = boost::multiprecision::ldexp(Quad(1), -e);
      p1 *= f;
      p2 *= f;
      q1 *= f;
      q2 *= f;
      g1 *= f;
      g2 *= f;
    }
  }
  return {p1, q1, g1};
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const std::size_t t = static_cast<std::size_t>(std::max(1, threads));
  if (t == 1 || count < 2 * t) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (count + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t k = lo; k < hi; ++k) body(k);
    });
  }
  for (auto& th : pool) th.join();
}

// Aberth correction N / (1 - N * sum 1/(z_k - z_j)).
QComplex aberth_step(const std::vector<QComplex>& z, std::size_t k, const QComplex& ratio) {
  QComplex sum(0);
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j == k) continue;
    const QComplex diff = z[k] - z[j];
    if (diff != QComplex(0)) sum += QComplex(1) / diff;
  }
  const QComplex denom = QComplex(1) - ratio * sum;
  if (denom == QComplex(0)) return ratio;
  return ratio / denom;
}

std::vector<QComplex> circle_guess(const QComplex& center, Quad radius, std::size_t count) {
  std::vector<QComplex> z(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Irrational offset keeps the start off any symmetry axis of the problem.
    const double angle = 2.0 * kPi * (static_cast<double>(k) + 0.25) / static_cast<double>(count) + 0.4;
    z[k] = center + radius * QComplex(Quad(std::cos(angle)), Quad(std::sin(angle)));
  }
  return z;
}

std::vector<int> cluster_multiplicities(std::vector<Complex>& atoms, double radius) {
  const std::size_t n = atoms.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(atoms[i] - atoms[j]) <= radius) parent[find(i)] = find(j);
    }
  }
  std::vector<int> count(n, 0);
  std::vector<Complex> sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    ++count[find(i)];
    sum[find(i)] += atoms[i];
  }
  std::vector<int> mult(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    mult[i] = count[r];
    if (count[r] > 1) atoms[i] = sum[r] / static_cast<double>(count[r]);
  }
  return mult;
}

// Tridiagonal LU with partial pivoting (row interchanges add a second
// superdiagonal). lower[i] sits at (i+1, i), upper[i] at (i, i+1).
bool tridiagonal_solve(std::vector<QComplex> lower, std::vector<QComplex> diag,
                       std::vector<QComplex> upper, std::vector<QComplex>& rhs) {
  const std::size_t n = diag.size();
  const QComplex tiny = QComplex(Quad(1e-30));
  std::vector<QComplex> upper2(n, QComplex(0));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (qabs(diag[i]) >= qabs(lower[i])) {
      if (diag[i] == QComplex(0)) diag[i] = tiny;
      const QComplex f = lower[i] / diag[i];
      diag[i + 1] -= f * upper[i];
      rhs[i + 1] -= f * rhs[i];
    } else {
      const QComplex f = diag[i] / lower[i];
      diag[i] = lower[i];
      const QComplex t = diag[i + 1];
      diag[i + 1] = upper[i] - f * t;
      if (i + 2 < n) {
        upper2[i] = upper[i + 1];
        upper[i + 1] = -f * upper2[i];
      }
      upper[i] = t;
      const QComplex b = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = b - f * rhs[i];
    }
  }
  if (diag[n - 1] == QComplex(0)) diag[n - 1] = tiny;
  for (std::size_t ii = n; ii-- > 0;) {
    QComplex s = rhs[ii];
    if (ii + 1 < n) s -= upper[ii] * rhs[ii + 1];
    if (ii + 2 < n) s -= upper2[ii] * rhs[ii + 2];
    rhs[ii] = s / diag[ii];
  }
  for (const auto& x : rhs) {
    if (!isfinite(x.real()) || !isfinite(x.imag())) return false;
  }
  return true;
}

QComplex polish_root(const SpectralMatrix& m, QComplex lambda) {
  const Quad floor = Quad(1e-31) * Quad(m.scale());
  Quad last = std::numeric_limits<Quad>::infinity();
  for (int it = 0; it < 60; ++it) {
    const QComplex step = newton_ratio(m, lambda);
    const Quad size = qabs(step);
    if (!isfinite(size) || size > Quad(4) * last) break;
    lambda -= step;
    if (size <= floor) break;
    last = size;
  }
  return lambda;
}

}  // namespace

Complex theta_n(int n, Complex alpha) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  const Complex t = static_cast<double>(n) * (static_cast<double>(n - 1) + alpha);
  if (t == 0.0) throw Error(ErrorCode::DegenerateTheta, "theta_n = n(n-1+alpha) vanishes");
  return t;
}

SpectralMatrix::SpectralMatrix(const ShiftedCubic& sc, const LowDegreePoly& p, int n)
    : n_(n), cubic_(sc), p_(p) {
  theta_n(n, p.alpha);
  const QComplex alpha = to_quad(p.alpha);
  const QComplex beta = to_quad(p.beta);
  const QComplex gam = to_quad(p.gamma);
  const QComplex v = to_quad(sc.v);
  const QComplex w = to_quad(sc.w);
  theta_ = Quad(n) * (Quad(n - 1) + alpha);

  diag_.resize(size());
  upper_.resize(size() - 1);
  lower_.resize(size() - 1);
  for (int i = 1; i <= n + 1; ++i) {
    const Quad a = Quad(n - i);
    const Quad b = Quad(n - i + 1);
    const Quad c = Quad(n - i + 2);
    diag_[i - 1] = -(v * (a * b) + beta * b) / theta_;
    if (i >= 2) {
      upper_[i - 2] = (QComplex(a * b) + alpha * b) / theta_ - QComplex(1);
      lower_[i - 2] = (w * (b * c) + gam * c) / theta_;
    }
  }
  const auto r = sc.other_roots();
  scale_ = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[0] - r[1]),
                     std::numeric_limits<double>::min()});
}

double SpectralMatrix::scale() const { return scale_; }

SpectralMatrix build_matrix(const ShiftedCubic& sc, const LowDegreePoly& p, int n) {
  return SpectralMatrix(sc, p, n);
}

ScaledValue ScaledValue::normalized(const QComplex& value, long exponent) {
  const Quad mag = qabs(value);
  if (mag == 0) return {};
  int e = 0;
  boost::multiprecision::frexp(mag, &e);
  const Quad f = boost::multiprecision::ldexp(Quad(1), 1 - e);
  Complex mant = to_double(value * f);
  long exp = exponent + e - 1;
  if (std::abs(mant) >= 2.0) {
    mant *= 0.5;
    ++exp;
  }
  return {mant, exp};
}

Complex ScaledValue::value() const {
  if (exponent > std::numeric_limits<int>::max() || exponent < std::numeric_limits<int>::min()) {
    const double inf = std::numeric_limits<double>::infinity();
    return exponent > 0 ? Complex(inf, inf) : Complex(0.0, 0.0);
  }
  const int e = static_cast<int>(exponent);
  return {std::ldexp(mantissa.real(), e), std::ldexp(mantissa.imag(), e)};
}

double ScaledValue::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log2(std::abs(mantissa)) + static_cast<double>(exponent);
}

ScaledValue sp_eval(const SpectralMatrix& m, Complex lambda, std::size_t k) {
  return sp_eval(m, to_quad(lambda), k);
}

ScaledValue sp_eval(const SpectralMatrix& m, const QComplex& lambda, std::size_t k) {
  if (k > m.size()) throw Error(ErrorCode::InvalidArgument, "recurrence index exceeds n+1");
  QComplex prev(0), cur(1);
  long exponent = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    const QComplex next =
        (lambda - m.xi(i)) * cur - (i >= 2 ? m.psi(i) * prev : QComplex(0));
    prev = cur;
    cur = next;
    rebalance(cur, prev, exponent);
  }
  return ScaledValue::normalized(cur, exponent);
}

QComplex newton_ratio(const SpectralMatrix& m, const QComplex& lambda) {
  const RatioState s = sp_with_derivative(m, lambda);
  if (s.derivative == QComplex(0)) {
    return s.value == QComplex(0) ? QComplex(0) : QComplex(Quad(1e-3) * Quad(m.scale()));
  }
  return s.value / s.derivative;
}

EmpiricalMeasure EmpiricalMeasure::translated(Complex c) const {
  EmpiricalMeasure out = *this;
  for (auto& a : out.atoms) a += c;
  const QComplex qc = to_quad(c);
  for (auto& a : out.precise) a += qc;
  return out;
}

EmpiricalMeasure spectral_roots(const SpectralMatrix& m, const RootOptions& opts) {
  const std::size_t count = m.size();
  const auto& sc = m.cubic();
  const auto r = sc.other_roots();
  const Complex centroid = (r[0] + r[1]) / 3.0;
  const double reach = std::max({std::abs(centroid), std::abs(r[0] - centroid),
                                 std::abs(r[1] - centroid)});
  const double spread = m.scale();
  std::vector<QComplex> z =
      circle_guess(to_quad(centroid), Quad(1.5 * std::max(reach, spread)), count);

  std::vector<QComplex> corr(count);
  std::vector<char> settled(count);
  const Quad stop = Quad(opts.tol) * Quad(spread);
  // A root is also settled once |Sp| is below the rounding noise of the
  // recurrence; near branch points of the limiting support the condition
  // number exceeds 1e25 at n = 100 and the tol-based rule alone cannot fire.
  const Quad noise = Quad(16 * static_cast<long>(count)) * std::numeric_limits<Quad>::epsilon();
  auto sweep = [&] {
    parallel_for(count, opts.threads, [&](std::size_t k) {
      const RatioState st = sp_with_derivative(m, z[k]);
      const QComplex ratio = st.derivative == QComplex(0) ? QComplex(Quad(1e-3) * Quad(spread))
                                                          : st.value / st.derivative;
      corr[k] = aberth_step(z, k, ratio);
      settled[k] = qabs(corr[k]) < stop || qabs(st.value) <= noise * st.bound;
    });
  };
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    sweep();
    Quad worst = 0;
    bool all = true;
    for (std::size_t k = 0; k < count; ++k) {
      z[k] -= corr[k];
      worst = std::max(worst, qabs(corr[k]));
      all = all && settled[k];
    }
    if (!isfinite(worst)) break;
    if (all) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::RootFindingFailure,
                "Aberth iteration did not converge for n = " + std::to_string(m.n()));
  }
  // The iteration converges cubically; two more sweeps reach quad round-off.
  for (int extra = 0; extra < 2; ++extra) {
    sweep();
    for (std::size_t k = 0; k < count; ++k) z[k] -= corr[k];
  }

  EmpiricalMeasure mu;
  mu.atoms.resize(count);
  mu.residual.resize(count);
  mu.precise = z;
  parallel_for(count, opts.threads, [&](std::size_t k) {
    mu.residual[k] = static_cast<double>(qabs(newton_ratio(m, z[k]))) / spread;
  });
  for (std::size_t k = 0; k < count; ++k) mu.atoms[k] = to_double(z[k]);
  mu.multiplicity = cluster_multiplicities(mu.atoms, opts.merge_tol * spread);
  return mu;
}

std::vector<Complex> PolynomialSolution::coefficients_double() const {
  std::vector<Complex> out;
  out.reserve(coefficients.size());
  for (const auto& c : coefficients) out.push_back(to_double(c));
  return out;
}

namespace {

// u_0 = 1 and rows 1..n; empty when a pivot alpha_{j+1} vanishes.
std::optional<std::vector<QComplex>> forward_sweep(const SpectralMatrix& m,
                                                   const QComplex& lambda) {
  const std::size_t n = static_cast<std::size_t>(m.n());
  std::vector<QComplex> u(n + 1, QComplex(0));
  u[0] = 1;
  for (std::size_t j = 1; j <= n; ++j) {
    const QComplex& pivot = m.alpha(j + 1);
    const Quad size = qabs(m.xi(j)) + qabs(lambda) + (j >= 2 ? qabs(m.gamma(j)) : Quad(0)) + 1;
    if (qabs(pivot) <= Quad(1e-24) * size) return std::nullopt;
    QComplex acc = (lambda - m.xi(j)) * u[j - 1];
    if (j >= 2) acc += m.gamma(j) * u[j - 2];
    u[j] = -acc / pivot;
  }
  return u;
}

// u_n = 1 and rows n+1..2; empty when a pivot gamma_j vanishes.
std::optional<std::vector<QComplex>> backward_sweep(const SpectralMatrix& m,
                                                    const QComplex& lambda) {
  const std::size_t n = static_cast<std::size_t>(m.n());
  std::vector<QComplex> u(n + 1, QComplex(0));
  u[n] = 1;
  for (std::size_t j = n + 1; j >= 2; --j) {
    const QComplex& pivot = m.gamma(j);
    const Quad size = qabs(m.xi(j)) + qabs(lambda) + (j <= n ? qabs(m.alpha(j + 1)) : Quad(0)) + 1;
    if (qabs(pivot) <= Quad(1e-24) * size) return std::nullopt;
    QComplex acc = (lambda - m.xi(j)) * u[j - 1];
    if (j <= n) acc += m.alpha(j + 1) * u[j];
    u[j - 2] = -acc / pivot;
  }
  return u;
}

// Takes f for indices <= r and b, rescaled to agree at r, above. Each sweep
// is componentwise accurate while the coefficients it produces grow, so the
// join sits at the peak of |f|; a residual-based choice cannot see errors in
// coefficients 30 orders below the peak.
std::vector<QComplex> twisted_join(const std::vector<QComplex>& f,
                                   const std::vector<QComplex>& b) {
  const std::size_t n = f.size() - 1;
  std::size_t r = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if (qabs(f[j]) > qabs(f[r])) r = j;
  }
  std::vector<QComplex> u(f);
  if (r < n && b[r] != QComplex(0)) {
    const QComplex scale = f[r] / b[r];
    for (std::size_t j = r + 1; j <= n; ++j) u[j] = b[j] * scale;
  }
  return u;
}

}  // namespace

PolynomialSolution recover_solution(const SpectralMatrix& m, Complex lambda) {
  return recover_solution(m, to_quad(lambda));
}

PolynomialSolution recover_solution(const SpectralMatrix& m, const QComplex& lambda0) {
  const QComplex lambda = polish_root(m, lambda0);
  const std::size_t n = static_cast<std::size_t>(m.n());
  PolynomialSolution sol;
  sol.lambda = lambda;
  sol.coefficients.assign(n + 1, QComplex(0));
  sol.coefficients[0] = 1;

  // Forward substitution from the leading coefficient is accurate while the
  // coefficients grow; backward substitution from the constant term is
  // accurate in a decaying tail.
  const auto forward = forward_sweep(m, lambda);
  const auto backward = backward_sweep(m, lambda);
  bool forward_ok = forward.has_value();
  if (forward && backward) {
    sol.coefficients = twisted_join(*forward, *backward);
  } else if (forward) {
    sol.coefficients = *forward;
  }

  if (!forward_ok) {
    // Inverse iteration on M(lambda) with a slightly shifted lambda.
    const std::size_t size = n + 1;
    const QComplex nudge = QComplex(Quad(1e-26) * Quad(m.scale()), Quad(0));
    std::vector<QComplex> diag(size), upper(size - 1), lower(size - 1);
    for (std::size_t j = 1; j <= size; ++j) {
      diag[j - 1] = lambda + nudge - m.xi(j);
      if (j <= n) upper[j - 1] = m.alpha(j + 1);
      if (j >= 2) lower[j - 2] = m.gamma(j);
    }
    // Row j of M couples u_{j-2}, u_{j-1}, u_j, so with rows shifted by one
    // the matrix is an ordinary tridiagonal one.
    std::vector<QComplex> x(size, QComplex(1));
    for (int pass = 0; pass < 3; ++pass) {
      if (!tridiagonal_solve(lower, diag, upper, x)) {
        throw Error(ErrorCode::NullSpaceFailure, "inverse iteration broke down");
      }
      Quad norm = 0;
      for (const auto& xi : x) norm = std::max(norm, qabs(xi));
      for (auto& xi : x) xi /= norm;
    }
    if (qabs(x[0]) <= Quad(1e-20)) {
      throw Error(ErrorCode::NullSpaceFailure, "null vector has vanishing leading coefficient");
    }
    const QComplex lead = x[0];
    for (std::size_t k = 0; k < size; ++k) sol.coefficients[k] = x[k] / lead;
  }

  for (const auto& c : sol.coefficients) {
    if (!isfinite(c.real()) || !isfinite(c.imag())) {
      throw Error(ErrorCode::NullSpaceFailure, "null vector overflowed");
    }
  }
  return sol;
}

double null_vector_residual(const SpectralMatrix& m, const PolynomialSolution& s) {
  const std::size_t n = static_cast<std::size_t>(m.n());
  if (s.coefficients.size() != n + 1) {
    throw Error(ErrorCode::InvalidArgument, "solution degree does not match the matrix");
  }
  const auto& u = s.coefficients;
  Quad worst = 0, norm = 0;
  for (const auto& c : u) norm = std::max(norm, qabs(c));
  for (std::size_t j = 1; j <= n + 1; ++j) {
    QComplex row = (s.lambda - m.xi(j)) * u[j - 1];
    if (j <= n) row += m.alpha(j + 1) * u[j];
    if (j >= 2) row += m.gamma(j) * u[j - 2];
    worst = std::max(worst, qabs(row));
  }
  return static_cast<double>(worst / norm);
}

double operator_residual(const ShiftedCubic& sc, const LowDegreePoly& p,
                         const PolynomialSolution& s) {
  const int n = s.degree();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "solution must have degree >= 1");
  const QComplex v = to_quad(sc.v), w = to_quad(sc.w);
  const QComplex al = to_quad(p.alpha), be = to_quad(p.beta), ga = to_quad(p.gamma);
  const QComplex theta = Quad(n) * (Quad(n - 1) + al);

  // Ascending coefficients: c[d] multiplies z^d.
  std::vector<QComplex> c(n + 1);
  for (int k = 0; k <= n; ++k) c[n - k] = s.coefficients[k];
  std::vector<QComplex> d1(n, QComplex(0)), d2(std::max(n - 1, 0), QComplex(0));
  for (int d = 1; d <= n; ++d) d1[d - 1] = Quad(d) * c[d];
  for (int d = 2; d <= n; ++d) d2[d - 2] = Quad(d) * Quad(d - 1) * c[d];

  std::vector<QComplex> out(n + 2, QComplex(0));
  auto add = [&](int deg, const QComplex& val) {
    if (deg >= 0 && deg <= n + 1) out[deg] += val;
  };
  for (int d = 0; d < static_cast<int>(d2.size()); ++d) {
    add(d + 3, d2[d]);
    add(d + 2, v * d2[d]);
    add(d + 1, w * d2[d]);
  }
  for (int d = 0; d < static_cast<int>(d1.size()); ++d) {
    add(d + 2, al * d1[d]);
    add(d + 1, be * d1[d]);
    add(d, ga * d1[d]);
  }
  for (int d = 0; d <= n; ++d) {
    add(d + 1, -theta * c[d]);
    add(d, theta * s.lambda * c[d]);
  }
  Quad top = 0, norm = 0;
  for (const auto& x : out) top = std::max(top, qabs(x));
  for (const auto& x : c) norm = std::max(norm, qabs(x));
  return static_cast<double>(top / norm);
}

namespace {

template <class C>
struct HornerRatio {
  C ratio;     // S / S'
  bool noisy;  // |S| below the Horner rounding bound
};

template <class C>
HornerRatio<C> horner_ratio(const std::vector<C>& u, const C& z) {
  using R = typename C::value_type;
  const std::size_t n = u.size() - 1;
  C p = u[0], dp(0);
  R bound = abs(u[0]);
  const R az = abs(z);
  for (std::size_t k = 1; k <= n; ++k) {
    dp = dp * z + p;
    p = p * z + u[k];
    bound = bound * az + abs(u[k]);
  }
  const R noise = R(16 * static_cast<long>(n + 1)) * std::numeric_limits<R>::epsilon();
  return {dp == C(0) ? p : p / dp, abs(p) <= noise * bound};
}

// 1/d as conj(d)/|d|^2; the library division guards against overflow that
// cannot occur for root differences and is several times slower in quad.
template <class C>
C reciprocal(const C& d) {
  const auto r2 = d.real() * d.real() + d.imag() * d.imag();
  return C(d.real() / r2, -d.imag() / r2);
}

template <class C>
C aberth_correction(const std::vector<C>& z, std::size_t k, const C& ratio) {
  C sum(0);
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j == k || z[k] == z[j]) continue;
    sum += reciprocal(C(z[k] - z[j]));
  }
  const C denom = C(1) - ratio * sum;
  return denom == C(0) ? ratio : ratio / denom;
}

// Aberth iteration from z; eval(z) gives the Newton ratio. A root is settled
// once its correction drops below `stop` or the polynomial value is at
// rounding level. Returns false if not all roots settled within `max_iter`.
template <class C, class Eval>
bool aberth_polish(std::vector<C>& z, typename C::value_type stop, int max_iter, Eval eval) {
  const std::size_t count = z.size();
  std::vector<C> corr(count);
  std::vector<char> settled(count);
  auto sweep = [&] {
    for (std::size_t k = 0; k < count; ++k) {
      const auto h = eval(z[k]);
      corr[k] = aberth_correction(z, k, h.ratio);
      settled[k] = abs(corr[k]) < stop || h.noisy;
    }
    bool all = true;
    for (std::size_t k = 0; k < count; ++k) {
      z[k] -= corr[k];
      all = all && settled[k];
    }
    return all;
  };
  for (int it = 0; it < max_iter; ++it) {
    if (sweep()) {
      sweep();
      return true;
    }
  }
  return false;
}

std::vector<Complex> to_double(const std::vector<QComplex>& u) {
  std::vector<Complex> out;
  out.reserve(u.size());
  for (const auto& x : u) out.push_back(heun::to_double(x));
  return out;
}

// Roots of a polynomial given in one or more expansions: a double-precision
// pass from a circle of starting points, then quad polishing. pick(z) selects
// the expansion (index, origin) used at z.
struct RootSet {
  std::vector<QComplex> z;
  bool converged = false;
};

template <class Pick>
RootSet polynomial_roots(const std::vector<std::vector<QComplex>>& expansions,
                         const std::vector<QComplex>& origins, const QComplex& center, Quad radius,
                         Quad scale, Pick pick) {
  std::vector<std::vector<Complex>> low;
  std::vector<Complex> low_origins;
  for (std::size_t f = 0; f < expansions.size(); ++f) {
    low.push_back(to_double(expansions[f]));
    low_origins.push_back(heun::to_double(origins[f]));
  }
  const std::size_t count = expansions.front().size() - 1;
  std::vector<QComplex> start = circle_guess(center, radius, count);
  std::vector<Complex> zd = to_double(start);
  aberth_polish(zd, 1e-14 * static_cast<double>(scale), 150, [&](const Complex& z) {
    const std::size_t f = pick(QComplex(to_quad(z)));
    return horner_ratio(low[f], Complex(z - low_origins[f]));
  });
  std::vector<QComplex> z;
  z.reserve(count);
  for (const Complex& x : zd) z.push_back(to_quad(x));
  const bool ok = aberth_polish(z, Quad(1e-30) * scale, 60, [&](const QComplex& x) {
    const std::size_t f = pick(x);
    return horner_ratio(expansions[f], QComplex(x - origins[f]));
  });
  return {std::move(z), ok};
}

}  // namespace

std::vector<Complex> solution_roots(const PolynomialSolution& s) {
  const int n = s.degree();
  if (n < 1) return {};
  const auto& u = s.coefficients;
  Quad radius = 0;
  for (int k = 1; k <= n; ++k) {
    const Quad r = pow(qabs(u[k] / u[0]), Quad(1) / Quad(k));
    radius = std::max(radius, r);
  }
  if (radius == 0) return std::vector<Complex>(n, Complex(0.0));
  const QComplex center = -u[1] / (Quad(n) * u[0]);
  const RootSet r = polynomial_roots({u}, {QComplex(0)}, center, radius, radius,
                                     [](const QComplex&) { return std::size_t{0}; });
  if (!r.converged) throw Error(ErrorCode::RootFindingFailure, "roots of S did not converge");
  return to_double(r.z);
}

double coefficient_limit_deviation(const SpectralMatrix& m) {
  const auto& sc = m.cubic();
  const QComplex v = to_quad(sc.v), w = to_quad(sc.w);
  const Quad np1 = Quad(m.n() + 1);
  Quad worst = 0;
  for (std::size_t i = 1; i <= m.size(); ++i) {
    const Quad tau = Quad(static_cast<long>(i)) / np1;
    const Quad th2 = (1 - tau) * (1 - tau);
    const QComplex xi_lim = -v * th2;
    const QComplex psi_lim = -w * (1 - th2) * th2;
    // alpha_{n,1} = 0, so psi_{n,1} vanishes.
    const QComplex psi = i >= 2 ? m.psi(i) : QComplex(0);
    worst = std::max(worst, qabs(m.xi(i) - xi_lim) + qabs(psi - psi_lim));
  }
  return static_cast<double>(worst);
}

namespace {

void check_atom(const EmpiricalMeasure& mu, Complex z) {
  if (mu.atoms.empty()) throw Error(ErrorCode::InvalidArgument, "empty measure");
  const double tol = 1e-14 * std::max(1.0, std::abs(z));
  for (const auto& t : mu.atoms) {
    if (std::abs(z - t) <= tol) throw Error(ErrorCode::AtomHit, "evaluation point is an atom");
  }
}

}  // namespace

Complex cauchy_transform_empirical(const EmpiricalMeasure& mu, Complex z) {
  check_atom(mu, z);
  Complex s = 0.0;
  for (const auto& t : mu.atoms) s += 1.0 / (z - t);
  return s * mu.weight();
}

double log_potential_empirical(const EmpiricalMeasure& mu, Complex z) {
  check_atom(mu, z);
  double s = 0.0;
  for (const auto& t : mu.atoms) s += std::log(std::abs(z - t));
  return s * mu.weight();
}

LowDegreePoly PChoice::in_frame(const ShiftedCubic& sc) const {
  if (is_lame()) return LowDegreePoly::lame(sc);
  return global->translated(sc.shift);
}

SpectrumResult compute_spectrum(const CubicConfig& c, const PChoice& p, int n,
                                std::size_t origin, const RootOptions& opts) {
  const ShiftedCubic sc = shift_to_root(c, origin);
  SpectralMatrix m = build_matrix(sc, p.in_frame(sc), n);
  EmpiricalMeasure mu = spectral_roots(m, opts).translated(sc.shift);
  return {std::move(m), std::move(mu)};
}

namespace {

// The roots x_k of S are characterised without reference to S itself by
//   G_k = Q(x_k) sum_{j != k} 2 / (x_k - x_j) + P(x_k) = 0,
// which follows from Q S'' + P S' + V S = 0 at a simple root. G is evaluated
// to full relative accuracy from the roots alone.
struct Equilibrium {
  QComplex v, w, alpha, beta, gamma;

  explicit Equilibrium(const SpectralMatrix& m)
      : v(to_quad(m.cubic().v)),
        w(to_quad(m.cubic().w)),
        alpha(to_quad(m.p().alpha)),
        beta(to_quad(m.p().beta)),
        gamma(to_quad(m.p().gamma)) {}

  QComplex q(const QComplex& x) const { return x * (x * (x + v) + w); }
  QComplex dq(const QComplex& x) const { return (Quad(3) * x + Quad(2) * v) * x + w; }
  QComplex p(const QComplex& x) const { return (alpha * x + beta) * x + gamma; }
  QComplex dp(const QComplex& x) const { return Quad(2) * alpha * x + beta; }

  // Largest |G_k| relative to the sum of the magnitudes of its terms, with P
  // counted monomial by monomial.
  Quad residual(const std::vector<QComplex>& x) const {
    Quad worst = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      QComplex sum(0);
      Quad mag = 0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j == k) continue;
        const QComplex d = x[k] - x[j];
        if (d == QComplex(0)) return Quad(1);
        sum += Quad(2) / d;
        mag += Quad(2) / qabs(d);
      }
      const QComplex qk = q(x[k]), pk = p(x[k]);
      const Quad r = qabs(x[k]);
      const Quad pmag = (qabs(alpha) * r + qabs(beta)) * r + qabs(gamma);
      const Quad denom = qabs(qk) * mag + pmag;
      if (denom == 0) continue;
      worst = std::max(worst, qabs(qk * sum + pk) / denom);
    }
    return worst;
  }

  // One Newton step on G; false if the Jacobian is singular.
  bool newton_step(std::vector<QComplex>& x) const {
    const std::size_t n = x.size();
    std::vector<QComplex> a(n * n), g(n);
    for (std::size_t k = 0; k < n; ++k) {
      QComplex s1(0), s2(0);
      const QComplex qk = q(x[k]);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        const QComplex r = Quad(1) / (x[k] - x[j]);
        s1 += Quad(2) * r;
        s2 += Quad(2) * r * r;
        a[k * n + j] = qk * Quad(2) * r * r;
      }
      g[k] = qk * s1 + p(x[k]);
      a[k * n + k] = dq(x[k]) * s1 - qk * s2 + dp(x[k]);
    }
    // Gaussian elimination with partial pivoting.
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r) {
        if (qabs(a[r * n + c]) > qabs(a[piv * n + c])) piv = r;
      }
      if (a[piv * n + c] == QComplex(0)) return false;
      if (piv != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
        std::swap(g[c], g[piv]);
      }
      const QComplex inv = Quad(1) / a[c * n + c];
      for (std::size_t r = c + 1; r < n; ++r) {
        const QComplex f = a[r * n + c] * inv;
        if (f == QComplex(0)) continue;
        for (std::size_t j = c + 1; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        g[r] -= f * g[c];
      }
    }
    for (std::size_t c = n; c-- > 0;) {
      QComplex acc = g[c];
      for (std::size_t j = c + 1; j < n; ++j) acc -= a[c * n + j] * g[j];
      g[c] = acc / a[c * n + c];
    }
    for (std::size_t k = 0; k < n; ++k) x[k] -= g[k];
    return true;
  }
};

}  // namespace

StieltjesSolver::StieltjesSolver(const CubicConfig& c, const PChoice& p, int n) : cubic_(c) {
  for (std::size_t f = 0; f < 3; ++f) {
    const ShiftedCubic sc = shift_to_root(c, f);
    frames_.push_back(build_matrix(sc, p.in_frame(sc), n));
  }
}

PolynomialSolution StieltjesSolver::solution(const QComplex& lambda, std::size_t frame) const {
  const SpectralMatrix& m = frames_.at(frame);
  return recover_solution(m, lambda - to_quad(m.cubic().shift));
}

std::vector<Complex> StieltjesSolver::roots(const QComplex& lambda) const {
  std::vector<std::vector<QComplex>> coeffs(3);
  std::vector<QComplex> origin(3);
  for (std::size_t f = 0; f < 3; ++f) {
    coeffs[f] = solution(lambda, f).coefficients;
    origin[f] = to_quad(frames_[f].cubic().shift);
  }
  // S / S' is the same function in every frame; evaluate it in the expansion
  // about the root of Q nearest to z.
  auto nearest = [&](const QComplex& z) {
    std::size_t best = 0;
    Quad dist = qabs(z - origin[0]);
    for (std::size_t f = 1; f < 3; ++f) {
      const Quad d = qabs(z - origin[f]);
      if (d < dist) {
        dist = d;
        best = f;
      }
    }
    return best;
  };
  const Complex g = cubic_.centroid();
  double reach = 0.0;
  for (const Complex a : cubic_.roots()) reach = std::max(reach, std::abs(a - g));
  const RootSet found =
      polynomial_roots(coeffs, origin, to_quad(g), Quad(reach), Quad(cubic_.diameter()), nearest);

  // Certify (and refine) in the frame of the first root.
  const Equilibrium eq(frames_[0]);
  std::vector<QComplex> x = found.z;
  for (QComplex& xi : x) xi -= origin[0];
  Quad res = eq.residual(x);
  for (int it = 0; it < kEquilibriumSteps && res > Quad(1e-28); ++it) {
    std::vector<QComplex> trial = x;
    if (!eq.newton_step(trial)) break;
    const Quad next = eq.residual(trial);
    if (!(next < res)) break;
    x = std::move(trial);
    res = next;
  }
  if (!(res < Quad(kEquilibriumTol))) {
    throw Error(ErrorCode::RootFindingFailure, "roots of S failed the equilibrium check");
  }
  for (QComplex& xi : x) xi += origin[0];
  return to_double(x);
}

}  // namespace heun
