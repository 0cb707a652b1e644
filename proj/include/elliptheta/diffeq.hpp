#pragma once

#include <functional>
#include <vector>

#include "elliptheta/phi.hpp"
#include "elliptheta/series.hpp"

// Residual verification of the bilateral q-difference equations satisfied by
// the theta hypergeometric series, their compact explicit form for the
// single-denominator series, the induced first-order Laurent recurrence, and
// kernel probes for the elementary operator theta(a q^delta; p).
//
// The master equation: with f the series solution,
//
//   sum_{n in Z} [ (p;p)_inf^{s-1-r} Phi_n(1, w_1/q, ..., w_r/q; p)
//                  - z Phi_n(t_0, ..., t_{s-1}; p) ] f(q^n z)  =  0,
//
// where Phi_n are the lattice coefficients from phi.hpp.  The balanced case
// s = r + 1 makes the front factor 1; it is kept so the identity also holds
// for mismatched parameter counts, where the two operator products carry
// different (p;p)_inf normalizations.
//
// Sampling policy: the equation is an identity for the formal power series.
// Every sample f(q^n z) is the SAME truncated polynomial (the first
// f_truncation coefficients, evaluated by Horner's rule), which is defined at
// every shifted point even when |q| < 1 drives q^{-n} z outside the disc of
// convergence.  Truncation pollution is policed instead: if a sampled point
// with non-negligible operator weight sees an undecayed polynomial tail large
// enough to move the normalized residual above ~1e-8, OutsideRadius is
// thrown.

namespace elliptheta {

struct OperatorTruncation {
  long long n_range = 16;       // bilateral window: |n| <= n_range
  long long f_truncation = 64;  // polynomial degree cutoff for sampling f

  // n_range >= 1 and f_truncation >= n_range + 10 (shifted arguments must
  // stay inside the reliably summed region).
  void validate() const;
};

struct ResidualReport {
  cplx residual{0.0, 0.0};
  double residual_scale = 0.0;  // largest summand magnitude in the window
  long long n_range_used = 0;
  // True when the normalized residual was nonincreasing (within 10% plus an
  // absolute noise floor of 1e-11) over the last two window doublings.
  bool converged = false;

  double normalized() const;  // |residual| / residual_scale, 0 when scale 0
};

// Residual of the master bilateral equation at z, sampling the series itself.
// Errors: PoleHit (from the series coefficients), OutsideRadius (see the
// sampling policy above).
ResidualReport residual_final_eq(const SeriesSpec& spec, cplx z,
                                 const OperatorTruncation& trunc);

// Same operator, but the caller supplies the samples: f_shift(n) must return
// the value standing in for f(q^n z).  No pollution policing is possible on
// caller samples.  Used e.g. to check that a q-periodic multiplier leaves the
// normalized residual unchanged.
ResidualReport residual_final_eq_with(
    const SeriesSpec& spec, cplx z, const OperatorTruncation& trunc,
    const std::function<cplx(long long)>& f_shift);

// Compact explicit form for the two-numerator / one-denominator series
// (t = (a, b), w = (c)):
//
//   sum_{n in Z} (-1)^n p^{binom(n,2)} [ theta(-(q/c) p^{n+1}; p^2)
//       - z a^n theta(-(a/b) p^{n+1}; p^2) ] f(q^n z) = 0.
//
// Summand-by-summand this equals the master equation divided by (p^2;p^2)_inf,
// so normalized residuals agree exactly and raw residuals differ by that
// constant.  Requires p != 0 (the compact coefficients degenerate to 0/0 at
// exact p = 0; use residual_final_eq there, whose lattice route reduces to the
// classical finite-order equation).
ResidualReport residual_2E1(cplx a, cplx b, cplx c, cplx q, cplx p, cplx z,
                            const OperatorTruncation& trunc);

// Even/odd split of the compact form, with the summation index k counting
// PAIRS of shifts (q^{2k} z and q^{2k+1} z).  trunc.n_range bounds |k|, so
// sampled shifts reach q^{2 n_range + 1} z and f_truncation must be at least
// 2 n_range + 11.  Same p != 0 requirement.
ResidualReport residual_2E1_split(cplx a, cplx b, cplx c, cplx q, cplx p,
                                  cplx z, const OperatorTruncation& trunc);

// The k-th summand of the split form (both lines combined), sampling the
// series polynomial like residual_2E1_split but without pollution policing:
// intended for inspecting how the bilateral sum collapses as p -> 0.
cplx split_summand_2E1(cplx a, cplx b, cplx c, cplx q, cplx p, cplx z,
                       const OperatorTruncation& trunc, long long k);

// Coefficient multiplying f(q^n z) in the unsplit compact form (the bracket
// above, sign and z-dependence included).  The split summand at index k must
// reproduce weight(2k) f(q^{2k} z) + weight(2k+1) f(q^{2k+1} z) exactly.
cplx bilateral_weight_2E1(cplx a, cplx b, cplx c, cplx q, cplx p, cplx z,
                          long long n);

// Laurent coefficients c_0 .. c_{count-1} generated by the first-order
// recurrence that the split equation forces on any single-valued solution
// sum c_n z^n.  With
//
//   A(n) = theta(-pq/c;p^2) theta(-c q^{2n-1};p^2)
//          - (c/q) q^n theta(-q/c;p^2) theta(-p c q^{2n-1};p^2),
//   B(n) = theta(-pa/b;p^2) theta(-a b q^{2n-2};p^2)
//          - b q^{n-1} theta(-a/b;p^2) theta(-p a b q^{2n-2};p^2),
//
// the recurrence is c_n = (B(n)/A(n)) c_{n-1}, c_0 = 1.  Requires p != 0.
// Errors: DegenerateParameters when some A(n) vanishes (relative 1e-10).
std::vector<cplx> laurent_recurrence_2E1(cplx a, cplx b, cplx c, cplx q,
                                         cplx p, int count);

// The backward ratio d_0 = A(0)/B(0) tying c_{-1} = d_0 c_0.  A(0) vanishes
// identically (theta reflection collapses its two terms), so d_0 = 0 for
// generic parameters and the recurrence kills every c_n with n < 0: the
// single-valued solutions are exactly the analytic series, up to q-periodic
// multipliers.
cplx laurent_backward_ratio_2E1(cplx a, cplx b, cplx c, cplx q, cplx p);

// Applies the elementary bilateral operator with symbol a,
//
//   (1/(p;p)_inf) sum_{n in Z} p^{binom(n,2)} (-a)^n f(q^n z),
//
// to caller-supplied samples f_shift(n) ~ f(q^n z), reporting the operator
// value as `residual` against the largest-summand scale.
ResidualReport theta_qdelta_apply(cplx a, cplx q, cplx p,
                                  const OperatorTruncation& trunc,
                                  const std::function<cplx(long long)>& f_shift);

// Annihilation probe: applies the operator above to the power function
//   f(u) = u^{L},   L = -log(a p^k) / log(q),
// continued branch-coherently along the orbit (f(q^n z) = exp(L (n log q +
// log z)) with principal logs of the base point).  The normalized report
// should vanish for every integer k; functions outside the kernel give an
// order-one value.
// Errors: ZeroArgument (z = 0), BranchCut (z on the negative real axis),
// ConstraintViolation (|q| = 1).
ResidualReport kernel_check(cplx a, cplx q, cplx p, long long k, cplx z,
                            const OperatorTruncation& trunc);

}  // namespace elliptheta
