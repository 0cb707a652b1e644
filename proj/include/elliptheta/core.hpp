#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

#include "elliptheta/errors.hpp"

// Core numeric types shared by every module: complex alias, truncation
// policy, the nome descriptor p = exp(2*pi*i*tau), the scaled complex
// representation used to dodge overflow in theta-quotient chains, and a few
// small deterministic helpers (integer powers, compensated summation).

namespace elliptheta {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Controls truncation of infinite products/sums.  abs_tol is interpreted
// against the natural scale of the quantity being accumulated (callers
// document the exact criterion); max_terms is a hard cap.
struct TruncationPolicy {
  double abs_tol = 1e-15;
  int max_terms = 20000;
};

// binom(n, 2) = n (n - 1) / 2, valid for negative n as well (always >= 0
// there: e.g. n = -2 gives 3).  64-bit to survive lattice exponent sums.
inline long long binom2(long long n) { return n * (n - 1) / 2; }

// Real-argument analogue x (x - 1) / 2 used by fractional-exponent bounds.
inline double binom2_real(double x) { return 0.5 * x * (x - 1.0); }

// Fractional part in [0, 1).
inline double frac_part(double x) { return x - std::floor(x); }

// z^k for integer k (binary exponentiation; exact branch-free semantics:
// integer powers of a complex number are single-valued).
inline cplx ipow(cplx z, long long k) {
  if (k == 0) return cplx{1.0, 0.0};
  bool inv = k < 0;
  unsigned long long e = inv ? static_cast<unsigned long long>(-(k + 1)) + 1ULL
                             : static_cast<unsigned long long>(k);
  cplx acc{1.0, 0.0};
  cplx base = z;
  while (e) {
    if (e & 1ULL) acc *= base;
    base *= base;
    e >>= 1;
  }
  return inv ? cplx{1.0, 0.0} / acc : acc;
}

// Kahan–Neumaier compensated accumulator for complex values.  Lattice sums
// and bilateral series accumulate with this to keep the result independent
// of benign reorderings at the 1e-16 level.
class KahanSum {
 public:
  void add(cplx v) {
    add_part(re_, ce_, v.real());
    add_part(im_, ci_, v.imag());
  }
  cplx value() const { return {re_ + ce_, im_ + ci_}; }

 private:
  static void add_part(double& s, double& c, double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  double re_ = 0, im_ = 0, ce_ = 0, ci_ = 0;
};

// Complex value in the form m * exp(e) with a moderate mantissa.  Theta
// quotients at deep lattice points have magnitudes far beyond double range;
// all internal chains combine exponents additively and only collapse to a
// plain complex at the end (possibly overflowing to inf, which is then the
// honest answer).
struct ScaledC {
  cplx m{0.0, 0.0};
  double e = 0.0;  // value = m * exp(e)

  static ScaledC from(cplx v) { return ScaledC{v, 0.0}.normalized(); }
  static ScaledC zero() { return {cplx{0.0, 0.0}, 0.0}; }

  bool is_zero() const { return m == cplx{0.0, 0.0}; }

  ScaledC normalized() const {
    if (is_zero()) return zero();
    double a = std::abs(m);
    if (a > 1e-8 && a < 1e8) return *this;
    double l = std::log(a);
    return {m / a, e + l};
  }

  ScaledC operator*(const ScaledC& o) const {
    if (is_zero() || o.is_zero()) return zero();
    return ScaledC{m * o.m, e + o.e}.normalized();
  }
  ScaledC operator*(cplx v) const { return *this * from(v); }
  ScaledC operator/(const ScaledC& o) const {
    return ScaledC{m / o.m, e - o.e}.normalized();
  }

  double log_abs() const {
    return is_zero() ? -std::numeric_limits<double>::infinity()
                     : std::log(std::abs(m)) + e;
  }

  cplx to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return m * std::exp(e);
  }
};

// Scaled integer power |z|^k e^{i k arg z}: the single-valued z^k kept in
// mantissa/exponent form so deep powers never overflow.
inline ScaledC scaled_ipow(cplx z, long long k) {
  if (k == 0) return ScaledC::from(cplx{1.0, 0.0});
  if (z == cplx{0.0, 0.0}) {
    if (k > 0) return ScaledC::zero();
    throw ZeroArgument("scaled_ipow: 0 raised to negative power");
  }
  double phase = std::remainder(double(k) * std::arg(z), kTwoPi);
  return {std::polar(1.0, phase), double(k) * std::log(std::abs(z))};
}

// Multiplicative nome descriptor.  Holds tau in the upper half plane and the
// derived p = exp(2*pi*i*tau) with |p| < 1; either can seed the other (tau
// from p uses the principal logarithm).
struct Nome {
  cplx tau{0.0, 0.0};
  cplx p{0.0, 0.0};

  static Nome from_tau(cplx tau) {
    if (!(tau.imag() > 0.0)) {
      throw OutsideDomain("Nome: Im(tau) must be positive");
    }
    Nome n;
    n.tau = tau;
    n.p = std::exp(kTwoPi * kI * tau);
    return n;
  }

  static Nome from_p(cplx p) {
    if (!(std::abs(p) < 1.0)) throw DivergedModulus("Nome: |p| must be < 1");
    if (p == cplx{0.0, 0.0}) {
      // Degenerate trigonometric limit: represent as Im(tau) = +inf.
      Nome n;
      n.tau = cplx{0.0, std::numeric_limits<double>::infinity()};
      n.p = p;
      return n;
    }
    Nome n;
    n.tau = std::log(p) / (kTwoPi * kI);
    n.p = p;
    return n;
  }

  double im_tau() const { return tau.imag(); }

  // Consistency between the stored pair; cheap sanity check used by specs.
  void validate() const {
    if (p == cplx{0.0, 0.0}) return;
    cplx back = std::exp(kTwoPi * kI * tau);
    if (std::abs(back - p) > 1e-14 * std::abs(p)) {
      throw ConstraintViolation("Nome: p and tau disagree");
    }
  }
};

// Base point q = exp(2*pi*i*chi*(N + M*tau)) lying on the geometric line
// indexed by the integer pair (N, M).
struct QSpec {
  double chi = 0.0;
  long long N = 0;
  long long M = 0;
  Nome nome;

  cplx log_q() const { return kTwoPi * kI * chi * (cplx(double(N)) + double(M) * nome.tau); }
  cplx q() const { return std::exp(log_q()); }

  void validate() const {
    if (N == 0 && M == 0) throw ConstraintViolation("QSpec: (N, M) = (0, 0)");
    nome.validate();
  }
};

// Integer line descriptor for orbit averages; D is the gcd used when a
// formula requires the reduced (primitive) direction.
struct LineSpec {
  long long N = 0;
  long long M = 0;
  Nome nome;

  long long D() const {
    long long a = N < 0 ? -N : N, b = M < 0 ? -M : M;
    while (b) {
      long long t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  cplx direction() const { return cplx(double(N)) + double(M) * nome.tau; }

  void validate() const {
    if (N == 0 && M == 0) throw ConstraintViolation("LineSpec: (N, M) = (0, 0)");
    nome.validate();
  }
};

}  // namespace elliptheta
