#include "elliptheta/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "elliptheta/errors.hpp"
#include "elliptheta/theta.hpp"

namespace elliptheta {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this, exp() of a scanned log-minimum is exactly 0.0 in doubles.
constexpr double kLatticeCollisionTol = 1e-12;
constexpr long long kMaxRationalPart = 1'000'000'000;

// Distance of x from the nearest integer, in [0, 1/2].
double lattice_distance(double x) {
  double f = frac_part(x);
  return std::min(f, 1.0 - f);
}

void require_domain(cplx q, cplx p) {
  if (q == cplx(0.0)) throw ZeroArgument("q must be nonzero");
  if (p == cplx(0.0))
    throw DegenerateParameters(
        "p = 0 degenerates the bounds; take the p -> 0 limit instead");
  if (std::abs(p) >= 1.0) throw DivergedModulus("|p| must lie in (0, 1)");
  if (std::abs(q) >= 1.0)
    throw OutsideDomain(
        "|q| must lie in (0, 1); reduce |q| > 1 through theta(z; p) = "
        "theta(p/z; p) first");
}

void require_declared_rational(cplx q, cplx p, const Rationality& rat) {
  double lq = std::log(std::abs(q));
  double lp = std::log(std::abs(p));
  double mismatch = std::abs(double(rat.b) * lq - double(rat.a) * lp);
  if (mismatch > 1e-9 * std::max(1.0, std::abs(double(rat.a) * lp)))
    throw ConstraintViolation(
        "alpha declared rational a/b but |q|^b and |p|^a disagree");
}

double sigma_of(cplx q, cplx p, const Rationality& rat) {
  return frac_part(
      (double(rat.b) * std::arg(q) - double(rat.a) * std::arg(p)) / kTwoPi);
}

// log of (|p|; |p|)_inf^2, a real positive constant.
double log_ppinf_sq(cplx p) {
  double ap = std::abs(p);
  return 2.0 * std::log(std::abs(qpochhammer_inf(cplx(ap), cplx(ap))));
}

struct ScanMin {
  double log_value = kInf;
  long long argmin = 0;
};

// Scans k = 1..depth over log-space terms weight_log(k) + log({+-k sigma}),
// guarding the lattice collision {+-k sigma} ~ 0 that makes the series
// itself divide by zero.
template <typename WeightLog>
ScanMin scan_rational(double sigma, int depth, WeightLog weight_log) {
  ScanMin out;
  for (long long k = 1; k <= depth; ++k) {
    double dist = lattice_distance(double(k) * sigma);
    if (dist < kLatticeCollisionTol)
      throw UndefinedSeries(
          "sigma is rational to working precision at multiple k = " +
          std::to_string(k) + ": q^{bk} collides with the p-lattice");
    double term = weight_log(k) + std::log(dist);
    if (term < out.log_value) {
      out.log_value = term;
      out.argmin = k;
    }
  }
  return out;
}

// Scans n = 1..depth over the irrational-alpha proxy terms
// weight_log(n, N_n, frac) + log({n alpha}) + log(1 - {n alpha}), guarding
// collisions of the reduced point q^n p^{-N_n} with 1.
template <typename WeightLog>
ScanMin scan_irrational(cplx q, cplx p, int depth, WeightLog weight_log) {
  double alpha = std::log(std::abs(q)) / std::log(std::abs(p));
  double arg_q = std::arg(q);
  double arg_p = std::arg(p);
  double lp = std::log(std::abs(p));
  ScanMin out;
  for (long long n = 1; n <= depth; ++n) {
    double x = double(n) * alpha;
    double nn = std::floor(x);
    double frac = x - nn;
    cplx y = std::polar(std::exp(frac * lp),
                        double(n) * arg_q - nn * arg_p);
    if (std::abs(y - cplx(1.0)) < kLatticeCollisionTol)
      throw UndefinedSeries(
          "q^n collides with the p-lattice at n = " + std::to_string(n) +
          "; alpha is rational to working precision");
    double term =
        weight_log(x, nn, frac) + std::log(frac) + std::log(1.0 - frac);
    if (term < out.log_value) {
      out.log_value = term;
      out.argmin = n;
    }
  }
  return out;
}

void require_scan_depth(int depth) {
  if (depth < 1 || depth > 1'000'000)
    throw ConstraintViolation("scan_depth must lie in [1, 1000000]");
}

}  // namespace

Rationality Rationality::rational(long long a, long long b) {
  if (a < 1 || b < 1 || a > kMaxRationalPart || b > kMaxRationalPart)
    throw ConstraintViolation("rational alpha needs 1 <= a, b <= 1e9");
  if (std::gcd(a, b) != 1)
    throw ConstraintViolation("rational alpha a/b must be in lowest terms");
  Rationality r;
  r.is_rational = true;
  r.a = a;
  r.b = b;
  return r;
}

Rationality Rationality::irrational() { return Rationality{}; }

AlphaDecomposition alpha_decomposition(cplx q, cplx p, long long n,
                                       const Rationality& rat) {
  require_domain(q, p);
  if (n < 1) throw ConstraintViolation("n must be >= 1");
  AlphaDecomposition d;
  d.rationality = rat;
  d.alpha = std::log(std::abs(q)) / std::log(std::abs(p));
  if (rat.is_rational) {
    require_declared_rational(q, p, rat);
    if (n > std::numeric_limits<long long>::max() / rat.a)
      throw ConstraintViolation("n * a overflows the exact decomposition");
    long long na = n * rat.a;
    d.N_n = na / rat.b;
    d.frac = double(na % rat.b) / double(rat.b);
  } else {
    double x = double(n) * d.alpha;
    if (!(std::abs(x) < 9.0e18))
      throw ConstraintViolation("n * alpha exceeds exact integer range");
    double nn = std::floor(x);
    d.N_n = (long long)nn;
    d.frac = x - nn;
  }
  return d;
}

double theta_qn_lower_bound(cplx q, cplx p, long long n,
                            const Rationality& rat) {
  AlphaDecomposition d = alpha_decomposition(q, p, n, rat);
  double ap = std::abs(p);
  double lp = std::log(ap);
  if (!rat.is_rational) {
    cplx y = std::polar(std::exp(d.frac * lp),
                        double(n) * std::arg(q) - double(d.N_n) * std::arg(p));
    if (std::abs(y - cplx(1.0)) < kLatticeCollisionTol)
      throw LatticeDegenerate(
          "q^n p^{-N_n} sits on the lattice at n = " + std::to_string(n) +
          " despite alpha being declared irrational");
  }
  // log of |p|^{-binom(N,2)} (1 - |p|^f) (1 - |p|^{1-f}) (|p|;|p|)_inf^2;
  // f = 0 (rational alpha with b | n) legitimately yields -infinity.
  return -double(binom2(d.N_n)) * lp + std::log1p(-std::pow(ap, d.frac)) +
         std::log1p(-std::pow(ap, 1.0 - d.frac)) + log_ppinf_sq(p);
}

double theta_sup_annulus(cplx p) {
  if (p == cplx(0.0))
    throw DegenerateParameters("p = 0 has no fundamental annulus");
  if (std::abs(p) >= 1.0) throw DivergedModulus("|p| must lie in (0, 1)");
  double ap = std::abs(p);
  double sup = 0.0;
  for (int i = 0; i < kThetaSupGrid; ++i) {
    double r = std::pow(ap, double(i) / double(kThetaSupGrid - 1));
    for (int j = 0; j < kThetaSupGrid; ++j) {
      cplx u = std::polar(r, kTwoPi * double(j) / double(kThetaSupGrid));
      sup = std::max(sup, std::abs(theta(u, p)));
    }
  }
  return kThetaSupInflation * sup;
}

ZBoundReport z_bound_0E0(cplx q, cplx p, const Rationality& rat,
                         int scan_depth) {
  require_domain(q, p);
  require_scan_depth(scan_depth);
  double ap = std::abs(p);
  double lp = std::log(ap);
  ZBoundReport rep;
  rep.scan_depth = scan_depth;
  rep.theta_sup = 1.0;
  rep.rationality = rat;
  if (rat.is_rational) {
    require_declared_rational(q, p, rat);
    rep.sigma = sigma_of(q, p, rat);
    long long a = rat.a;
    // binom2 of k*a in doubles: exact up to 2^53 and only ever feeds a log.
    ScanMin m = scan_rational(rep.sigma, scan_depth, [&](long long k) {
      return -binom2_real(double(k) * double(a)) * lp;
    });
    rep.proxy_c = std::exp(m.log_value);
    rep.proxy_argmin = m.argmin;
    double plain = 1.0 - std::pow(ap, 1.0 / double(rat.b));
    rep.z_bound =
        std::min(rep.proxy_c, plain * plain) * std::exp(log_ppinf_sq(p));
  } else {
    ScanMin m = scan_irrational(q, p, scan_depth,
                                [&](double x, double /*nn*/, double /*f*/) {
                                  return -binom2_real(x - 1.0) * lp;
                                });
    rep.proxy_c = std::exp(m.log_value);
    rep.proxy_argmin = m.argmin;
    rep.z_bound = rep.proxy_c * ap * lp * lp * std::exp(log_ppinf_sq(p));
  }
  return rep;
}

ZBoundReport z_bound_1E0(cplx t0, cplx q, cplx p, const Rationality& rat,
                         int scan_depth) {
  require_domain(q, p);
  require_scan_depth(scan_depth);
  if (t0 == cplx(0.0)) throw ZeroArgument("t0 must be nonzero");
  double ap = std::abs(p);
  double lp = std::log(ap);
  // log |q / t0|: positive weights shrink the proxy when |t0| < |q|.
  double lqt = std::log(std::abs(q)) - std::log(std::abs(t0));
  ZBoundReport rep;
  rep.scan_depth = scan_depth;
  rep.theta_sup = theta_sup_annulus(p);
  rep.rationality = rat;
  ScanMin m;
  if (rat.is_rational) {
    require_declared_rational(q, p, rat);
    rep.sigma = sigma_of(q, p, rat);
    long long a = rat.a;
    m = scan_rational(rep.sigma, scan_depth, [&](long long k) {
      return -double(k * a) * lqt;
    });
  } else {
    m = scan_irrational(q, p, scan_depth,
                        [&](double /*x*/, double nn, double /*f*/) {
                          return -nn * lqt;
                        });
  }
  rep.proxy_c = std::exp(m.log_value);
  rep.proxy_argmin = m.argmin;
  if (!(rep.proxy_c > 0.0))
    throw NonPositiveInfimumProxy(
        "the scanned infimum proxy underflowed to zero; no positive z-domain "
        "can be reported for this t0");
  if (rat.is_rational) {
    double plain = 1.0 - std::pow(ap, 1.0 / double(rat.b));
    rep.z_bound = std::min(plain * plain, rep.proxy_c) / rep.theta_sup *
                  std::exp(log_ppinf_sq(p));
  } else {
    rep.z_bound =
        rep.proxy_c / rep.theta_sup * ap * lp * lp * std::exp(log_ppinf_sq(p));
  }
  return rep;
}

}  // namespace elliptheta
