#include "elliptheta/theta.hpp"

#include <cmath>

namespace elliptheta {

namespace {

void require_modulus(cplx p) {
  if (!(std::abs(p) < 1.0)) throw DivergedModulus("theta: |p| >= 1");
}

// Core annulus product.  Accumulates theta(u; p) together with a running
// scale: the product of max(|factor|, 1) over every factor consumed.  The
// ratio |theta| / scale is what the zero-snap and pole guards look at.
ThetaEval theta_annulus(cplx u, cplx p, const TruncationPolicy& policy) {
  cplx prod{1.0, 0.0};
  double log_scale = 0.0;
  double ap = std::abs(p);
  double cutoff = policy.abs_tol * (1.0 - ap);
  cplx zpow = u;        // u * p^n
  cplx wpow = p / u;    // p^{n+1} / u
  ScaledC acc = ScaledC::from(cplx{1.0, 0.0});
  for (int n = 0; n < policy.max_terms; ++n) {
    bool z_done = std::abs(zpow) < cutoff;
    bool w_done = std::abs(wpow) < cutoff;
    if (z_done && w_done) {
      acc = acc * ScaledC::from(prod);
      return {acc.normalized(), std::exp(acc.log_abs() - log_scale)};
    }
    if (!z_done) {
      cplx f = cplx{1.0, 0.0} - zpow;
      prod *= f;
      double af = std::abs(f);
      if (af > 1.0) log_scale += std::log(af);
      zpow *= p;
    }
    if (!w_done) {
      cplx f = cplx{1.0, 0.0} - wpow;
      prod *= f;
      double af = std::abs(f);
      if (af > 1.0) log_scale += std::log(af);
      wpow *= p;
    }
    // Re-normalize the running product so a single tiny factor cannot
    // underflow the remaining accumulation.
    double apd = std::abs(prod);
    if (apd != 0.0 && (apd < 1e-120 || apd > 1e120)) {
      acc = acc * ScaledC::from(prod);
      prod = cplx{1.0, 0.0};
    }
    if (prod == cplx{0.0, 0.0}) {
      return {ScaledC::zero(), 0.0};
    }
  }
  throw TruncationExceeded("theta: product did not truncate within max_terms");
}

}  // namespace

cplx qpochhammer_inf(cplx a, cplx p, const TruncationPolicy& policy) {
  require_modulus(p);
  double ap = std::abs(p);
  double cutoff = policy.abs_tol * (1.0 - ap);
  cplx prod{1.0, 0.0};
  cplx apow = a;
  for (int n = 0; n < policy.max_terms; ++n) {
    if (std::abs(apow) < cutoff) return prod;
    prod *= (cplx{1.0, 0.0} - apow);
    apow *= p;
  }
  throw TruncationExceeded("qpochhammer_inf: max_terms reached");
}

ThetaEval theta_scaled(cplx z, cplx p, const TruncationPolicy& policy) {
  if (z == cplx{0.0, 0.0}) throw ZeroArgument("theta: z = 0");
  require_modulus(p);
  if (p == cplx{0.0, 0.0}) {
    cplx v = cplx{1.0, 0.0} - z;
    double rel = std::abs(v) / std::max(1.0, std::abs(v));
    return {ScaledC::from(v), rel};
  }
  double lz = std::log(std::abs(z));
  double lp = std::log(std::abs(p));
  long long k = static_cast<long long>(std::floor(lz / lp + 0.5));
  if (k == 0) {
    return theta_annulus(z, p, policy);
  }
  // z = p^k u with u in the unit-ish annulus:
  //   theta(z; p) = (-u)^{-k} p^{-k(k-1)/2} theta(u; p).
  cplx u = std::exp(std::log(z) - double(k) * std::log(p));
  ThetaEval base = theta_annulus(u, p, policy);
  cplx s = -double(k) * std::log(-u) - double(binom2(k)) * std::log(p);
  ScaledC mult{std::exp(cplx{0.0, s.imag()}), s.real()};
  return {(base.value * mult).normalized(), base.rel};
}

cplx theta(cplx z, cplx p, const TruncationPolicy& policy) {
  ThetaEval ev = theta_scaled(z, p, policy);
  if (ev.rel < kThetaZeroSnap) return {0.0, 0.0};
  return ev.value.to_complex();
}

double log_abs_theta(cplx z, cplx p, const TruncationPolicy& policy) {
  ThetaEval ev = theta_scaled(z, p, policy);
  if (ev.rel < kThetaZeroSnap) return -std::numeric_limits<double>::infinity();
  return ev.value.log_abs();
}

cplx theta_sum(cplx z, cplx p, const TruncationPolicy& policy) {
  if (z == cplx{0.0, 0.0}) throw ZeroArgument("theta_sum: z = 0");
  require_modulus(p);
  KahanSum sum;
  sum.add(cplx{1.0, 0.0});  // n = 0 term
  // Ascending direction: t_{n+1} = t_n * (-z) * p^n.
  cplx t{1.0, 0.0};
  cplx pn{1.0, 0.0};
  int n = 0;
  for (; n < policy.max_terms; ++n) {
    t *= -z * pn;
    pn *= p;
    sum.add(t);
    if (std::abs(t) < policy.abs_tol) break;
  }
  if (n == policy.max_terms) throw TruncationExceeded("theta_sum: ascending");
  // Descending direction (n < 0): t_{n-1} = t_n * p^{-(n-1)} / (-z); starting
  // from n = 0, the first step multiplies by p^{1} / (-z)... concretely
  // binom(n-1,2) - binom(n,2) = -(n-1), so stepping from n to n-1 multiplies
  // the p-power by p^{-(n-1)} and divides one factor of (-z).
  t = cplx{1.0, 0.0};
  for (int m = 0; m < policy.max_terms; ++m) {
    long long n_next = -(m + 1LL);  // moving to this index
    t *= ipow(p, -n_next) / (-z);
    sum.add(t);
    if (std::abs(t) < policy.abs_tol) {
      cplx pp = qpochhammer_inf(p, p, policy);
      return sum.value() / pp;
    }
  }
  throw TruncationExceeded("theta_sum: descending");
}

cplx theta_shift(cplx z, cplx p, long long k, const TruncationPolicy& policy) {
  if (z == cplx{0.0, 0.0}) throw ZeroArgument("theta_shift: z = 0");
  return ipow(-z, -k) * ipow(p, -binom2(k)) * theta(z, p, policy);
}

ScaledC elliptic_pochhammer_scaled(cplx t, cplx p, cplx q, int n,
                                   const TruncationPolicy& policy) {
  if (n < 0) throw ConstraintViolation("elliptic_pochhammer: n < 0");
  ScaledC prod = ScaledC::from(cplx{1.0, 0.0});
  cplx arg = t;
  for (int m = 0; m < n; ++m) {
    ThetaEval ev = theta_scaled(arg, p, policy);
    if (ev.rel < kThetaZeroSnap) return ScaledC::zero();
    prod = prod * ev.value;
    arg *= q;
  }
  return prod;
}

cplx elliptic_pochhammer(cplx t, cplx p, cplx q, int n,
                         const TruncationPolicy& policy) {
  return elliptic_pochhammer_scaled(t, p, q, n, policy).to_complex();
}

cplx bernoulli_b22(cplx u, cplx w1, cplx w2) {
  return u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (6.0 * w2) +
         w2 / (6.0 * w1) + cplx{0.5, 0.0};
}

std::pair<cplx, cplx> modular_check(cplx u, cplx w1, cplx w2,
                                    const TruncationPolicy& policy) {
  cplx nome_lhs = std::exp(-kTwoPi * kI * w2 / w1);
  cplx nome_rhs = std::exp(kTwoPi * kI * w1 / w2);
  if (!(std::abs(nome_lhs) < 1.0) || !(std::abs(nome_rhs) < 1.0)) {
    throw OutsideDomain("modular_check: a nome left the unit disc");
  }
  cplx lhs = theta(std::exp(-kTwoPi * kI * u / w1), nome_lhs, policy);
  cplx rhs = std::exp(kPi * kI * bernoulli_b22(u, w1, w2)) *
             theta(std::exp(kTwoPi * kI * u / w2), nome_rhs, policy);
  return {lhs, rhs};
}

}  // namespace elliptheta
