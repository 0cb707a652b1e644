#pragma once
// Explicit convergence domains for the two simplest theta-quotient series
//
//   0E0(z)     = sum_{n>=0} z^n / theta(q; p; q)_n,
//   1E0(t0; z) = sum_{n>=0} theta(t0; p; q)_n / theta(q; p; q)_n * z^n,
//
// for 0 < |q| < 1 (the |q| > 1 case reduces to this one through the theta
// reflection law; |q| = 1 needs entirely different tools and is out of
// scope).  The engine is a family of explicit lower bounds for |theta(q^n;
// p)| driven by the decomposition
//
//   n * alpha = N_n + {n alpha},   alpha = log|q| / log|p|,
//
// which reduces q^n to the annulus point q^n p^{-N_n} of modulus
// |p|^{{n alpha}}.  The arithmetic nature of alpha decides which regime
// applies, and the caller must declare it: rationality cannot be detected
// reliably from doubles, so misdeclaring it is a caller error (continued-
// fraction probes are advisory only; see cf_growth_probe).
//
// All bound constants below the z-level are returned as natural logs: the
// reduction prefactor |p|^{-binom(N_n, 2)} leaves double range near n ~ 100
// already, and only the logarithm is ever compared or summed.

#include "elliptheta/core.hpp"

namespace elliptheta {

// Caller's declaration of the arithmetic nature of alpha = log|q|/log|p|.
struct Rationality {
  bool is_rational = false;
  long long a = 0;  // alpha = a/b in lowest terms (declared-rational only)
  long long b = 1;

  // a, b >= 1, coprime, below 1e9 (ConstraintViolation otherwise).
  static Rationality rational(long long a, long long b);
  static Rationality irrational();
};

// Decomposition of n * alpha for one index n.
struct AlphaDecomposition {
  double alpha = 0.0;     // log|q| / log|p|
  long long N_n = 0;      // floor(n * alpha)
  double frac = 0.0;      // {n * alpha} in [0, 1)
  Rationality rationality;
};

// Builds the decomposition, validating the parameter domain (0 < |q| < 1,
// 0 < |p| < 1, n >= 1) and — for a declared-rational alpha — that |q|^b and
// |p|^a actually agree to 1e-9 relative (ConstraintViolation).  In the
// rational case N_n and frac come from exact integer arithmetic on n a / b.
AlphaDecomposition alpha_decomposition(cplx q, cplx p, long long n,
                                       const Rationality& rat);

// Natural log of the explicit lower bound
//
//   |theta(q^n; p)| >= |p|^{-binom(N_n, 2)} (1 - |p|^{{n alpha}})
//                      (1 - |p|^{1 - {n alpha}}) (|p|; |p|)_inf^2,
//
// obtained from the lattice reduction of q^n and |1 - u| >= 1 - |u| applied
// factor by factor.  At a declared-rational alpha with b | n the middle
// factor vanishes and the result is -infinity (the sigma route inside the
// z-bounds takes over there).  Throws LatticeDegenerate when the reduced
// point q^n p^{-N_n} sits within 1e-12 of 1 while alpha is declared
// irrational: that is numerically a lattice collision q^n = p^{N_n}, so the
// decomposition contradicts the declaration.
double theta_qn_lower_bound(cplx q, cplx p, long long n,
                            const Rationality& rat);

// Sampled supremum of |theta(u; p)| over the fundamental annulus
// |p| <= |u| <= 1 on a kThetaSupGrid x kThetaSupGrid grid (geometric in
// modulus, uniform in angle), inflated by kThetaSupInflation.  A heuristic
// stand-in for "the theta function is bounded on the fundamental domain by
// some constant S" — a finite grid cannot certify a supremum, and callers
// get the raw sampled data through the inflation factor being fixed and
// documented.
inline constexpr int kThetaSupGrid = 512;
inline constexpr double kThetaSupInflation = 1.5;
double theta_sup_annulus(cplx p);

// Result of a z-domain computation.  The series is guaranteed (at scanned
// depth) to converge for |z| < z_bound; the infimum constants are
// finite-depth proxies, never certified limits, and the scan depth is
// recorded so callers can judge how far the claim reaches.
struct ZBoundReport {
  double z_bound = 0.0;
  double proxy_c = 0.0;        // the scanned infimum proxy C
  long long proxy_argmin = 0;  // scan index attaining the minimum
  int scan_depth = 0;
  double theta_sup = 0.0;      // S heuristic (1.0 for the 0-parameter series)
  double sigma = 0.0;          // {arg(q^b p^-a)/2 pi} (rational alpha only)
  Rationality rationality;
};

// z-domain of the 0-parameter series.  Declared-rational alpha = a/b:
//
//   z_bound = min(C(sigma), (1 - |p|^{1/b})^2) * (|p|; |p|)_inf^2,
//   C(sigma) = min_{k <= depth} |p|^{-binom(k a, 2)} {+-k sigma},
//
// where q^b p^{-a} = e^{2 pi i sigma} and {+-x} is the distance of x from
// the nearest integer.  Declared-irrational alpha:
//
//   z_bound = C(alpha) |p| log^2|p| (|p|; |p|)_inf^2,
//   C(alpha) = min_{n <= depth} |p|^{-binom2(n alpha - 1)} {n alpha}{-n alpha}.
//
// Throws UndefinedSeries when the scan meets a lattice collision (sigma
// rational to 1e-12, or q^n p^{-N_n} within 1e-12 of 1): the series itself
// divides by theta values that vanish on such a lattice.
ZBoundReport z_bound_0E0(cplx q, cplx p, const Rationality& rat,
                         int scan_depth);

// z-domain of the 1-parameter series with numerator parameter t0.  Same
// regimes, with the numerator thetas bounded by the annulus supremum S and
// the proxies weighted by |q / t0|:
//
//   rational:   z_bound = min((1 - |p|^{1/b})^2, C(sigma, t0)) / S
//                         * (|p|; |p|)_inf^2,
//               C(sigma, t0) = min_k |q/t0|^{-k a} {+-k sigma};
//   irrational: z_bound = C(alpha, t0) / S * |p| log^2|p| (|p|; |p|)_inf^2,
//               C(alpha, t0) = min_n |q/t0|^{-N_n} {n alpha}{-n alpha}.
//
// The proxy underflowing to zero (|t0| < |q| drives it geometrically to 0)
// raises NonPositiveInfimumProxy: no positive bound can be reported.
ZBoundReport z_bound_1E0(cplx t0, cplx q, cplx p, const Rationality& rat,
                         int scan_depth);

}  // namespace elliptheta
