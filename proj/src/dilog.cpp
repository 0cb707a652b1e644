#include "elliptheta/dilog.hpp"

#include <array>
#include <cmath>

namespace elliptheta {

double zeta_even(int two_k) {
  if (two_k < 2 || two_k % 2 != 0)
    throw ConstraintViolation("zeta_even: argument must be an even integer >= 2");
  // Euler-Maclaurin: direct block to N-1, then N^{1-s}/(s-1) + N^{-s}/2 and
  // three Bernoulli corrections.  Accurate to ~1e-16 down to s = 2.
  static const std::array<double, 33> table = [] {
    std::array<double, 33> z{};
    constexpr double N = 24.0;
    for (int k = 1; k <= 32; ++k) {
      const double s = 2.0 * k;
      double sum = 0.0;
      for (int n = 23; n >= 2; --n) sum += std::pow(double(n), -s);
      sum += 1.0;
      const double Ns = std::pow(N, -s);
      sum += Ns * N / (s - 1.0) + Ns / 2.0 + s * Ns / (12.0 * N);
      sum -= s * (s + 1.0) * (s + 2.0) * Ns / (720.0 * N * N * N);
      sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * Ns /
             (30240.0 * N * N * N * N * N);
      z[k] = sum;
    }
    return z;
  }();
  if (two_k >= 66) return 1.0;  // below double resolution of zeta - 1
  return table[two_k / 2];
}

double dilog_circle_re(double arg) {
  double a = std::fmod(arg, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a * a / 4.0 - kPi * a / 2.0 + kPi * kPi / 6.0;
}

double clausen2(double arg) {
  double a = std::fmod(arg, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  double sign = 1.0;
  if (a > kPi) {  // Cl2(2pi - a) = -Cl2(a)
    a = kTwoPi - a;
    sign = -1.0;
  }
  if (a == 0.0) return 0.0;
  // Cl2(a) = a - a log a + sum_{k>=1} zeta(2k) a^{2k+1} / (k (2k+1) (2pi)^{2k})
  double acc = a - a * std::log(a);
  const double r = (a / kTwoPi) * (a / kTwoPi);
  double pw = r;
  for (int k = 1; k <= 40; ++k) {
    const double term = zeta_even(2 * k) / (k * (2.0 * k + 1.0)) * a * pw;
    acc += term;
    if (term < 1e-18) break;
    pw *= r;
  }
  return sign * acc;
}

cplx dilog(cplx x, double tol, long long max_terms) {
  const double r = std::abs(x);
  if (r > 1.0 + 1e-14) throw OutsideDomain("dilog: |x| > 1");
  if (r >= 1.0 - 1e-13) {
    double a = std::arg(x);
    if (a < 0.0) a += kTwoPi;
    return {dilog_circle_re(a), clausen2(a)};
  }
  if (r == 0.0) return {0.0, 0.0};
  KahanSum acc;
  cplx pw{1.0, 0.0};
  double rp = r;
  for (long long n = 1; n <= max_terms; ++n) {
    pw *= x;
    acc.add(pw / double(n * n));
    rp *= r;  // rp = r^{n+1}
    if (rp / double(n * n) / (1.0 - r) <= tol) return acc.value();
  }
  throw NotConverged("dilog: series tail bound not met within max_terms");
}

}  // namespace elliptheta
