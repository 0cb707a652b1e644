#pragma once

#include <cstddef>
#include <vector>

#include "elliptheta/core.hpp"
#include "elliptheta/theta.hpp"

// Series evaluation layer: theta-quotient hypergeometric-type power series,
// their basic (p = 0) degenerations, and the very-well-poised variant.
//
// The central object is the sum
//
//   sum_{n>=0}  prod_m theta(t_m; p; q)_n
//              ---------------------------------------------  z^n,
//              theta(q; p; q)_n prod_k theta(w_k; p; q)_n
//
// evaluated by term recursion through the one-step coefficient ratio
//
//   h(n) = prod_m theta(t_m q^n; p)
//          / [ theta(q^{n+1}; p) prod_k theta(w_k q^n; p) ],
//
// so that c_{n+1} = c_n * h(n) * z.  A zero of a numerator factor
// theta(t_m q^n; p) makes every later coefficient vanish: the sum is a
// finite (terminating) one and evaluation reports that exactly.  Zeros of
// denominator factors mean the series itself is ill-defined at that index;
// they are trapped as PoleHit before producing a huge term.
//
// For a balanced spec (prod t = q prod w, one more numerator than
// denominator parameter, t_0 = q) the ratio collapses to the single
// function
//
//   H(u) = prod_{k=1}^{r} theta(u t_k; p) / theta(u w_k; p),
//
// which is invariant under u -> p u.  H drives the closed form for
// root-of-unity-type bases (rational_chi_sum) and the convergence-radius
// machinery in radius.hpp.

namespace elliptheta {

// Relative threshold below which a balancing / structural identity between
// parameter products is considered to hold.
inline constexpr double kBalanceTol = 1e-12;
// Looser threshold used for *classifying* a user-supplied spec (balanced /
// well-poised / very-well-poised) rather than validating a constructed one.
inline constexpr double kClassifyTol = 1e-10;

// Parameter block for the theta-quotient series above.  z is an evaluation
// argument, not a field.  t may be empty (no numerator parameters) and so
// may w; the theta(q;p;q)_n factor in the denominator is always present.
struct SeriesSpec {
  std::vector<cplx> t;  // numerator parameters t_0 .. t_{s-1}
  std::vector<cplx> w;  // denominator parameters w_1 .. w_r
  cplx q{0.0, 0.0};
  Nome nome;

  std::size_t upper_count() const { return t.size(); }  // s
  std::size_t lower_count() const { return w.size(); }  // r

  // Structural checks only: nome consistent, q and all parameters nonzero.
  // Zeros of denominator factors along the orbit q^n are *not* scanned here;
  // they are detected lazily during evaluation and raised as PoleHit.
  void validate() const;
};

// Parameter block for the very-well-poised sum
//
//   sum_{n>=0}  theta(t0 q^{2n}; p)                theta(t_m; p; q)_n
//               ------------------  prod_{m=0}^{r-4} --------------------  q^n,
//               theta(t0; p)                       theta(q t0/t_m; p; q)_n
//
// where the product index m = 0 refers to t0 itself and t holds the free
// parameters t_1 .. t_{r-4}.  The sign nu enters the balancing constraint
//
//   prod_{k=1}^{r-4} t_k = nu * t0^{(r-5)/2} * q^{(r-7)/2},   nu = +-1,
//
// with nu = +1 mandatory when r is odd.  For even r the half-integer powers
// are taken on the principal branch.
struct VwpSpec {
  cplx t0{0.0, 0.0};
  std::vector<cplx> t;  // t_1 .. t_{r-4}
  int nu = 1;
  cplx q{0.0, 0.0};
  Nome nome;

  std::size_t order() const { return t.size() + 4; }  // r

  // Checks the balancing constraint to rel kBalanceTol (Unbalanced), the
  // sign convention (ConstraintViolation), and structural nonzero-ness.
  void validate() const;
};

// Outcome of a truncated series evaluation.
struct PartialSumResult {
  cplx value{0.0, 0.0};
  long long terms_used = 0;          // number of coefficients accumulated
  double last_term_magnitude = 0.0;  // |c_n z^n| of the final term added
  bool terminated = false;  // an exact numerator zero cut the sum short
  bool converged = true;    // false: max_terms hit before the tail test
  std::vector<double> term_log_ratios;  // log|c_{n+1} z^{n+1} / (c_n z^n)|
};

// One-step coefficient ratio h(n) as defined above (without the z factor).
// Throws PoleHit when a denominator factor sits on its zero lattice; an
// exact numerator zero returns 0.  A numerator parameter that coincides with
// a denominator parameter (typically the conventional t_0 = q) cancels
// symbolically before evaluation, so shared lattice hits are not
// misreported as termination or poles.
cplx term_ratio_h(const SeriesSpec& spec, long long n);

// h as a function of the orbit point u = q^n: the same quotient with every
// factor evaluated at parameter * u (the q^{n+1} factor at q * u).  Useful
// for probing the ratio off the integer orbit, e.g. at p-shifted points.
cplx term_ratio_at(const SeriesSpec& spec, cplx u);

// Truncated evaluation of the theta-quotient series at argument z.
//
// Stops on (a) exact termination — a numerator theta zero at some index
// makes all later terms vanish; (b) tail convergence — five consecutive
// strictly decreasing term magnitudes all below tail_tol; or (c) max_terms,
// in which case the partial sum is still returned with converged = false.
// Term magnitudes beyond ~1e290 also stop the loop (converged = false):
// the series is diverging violently and further terms only overflow.
PartialSumResult eval_sEr(const SeriesSpec& spec, cplx z,
                          long long max_terms = 4000, double tail_tol = 1e-14);

// Truncated evaluation of the very-well-poised sum.  Stopping rules match
// eval_sEr.  The leading theta(t0 q^{2n}; p) factor multiplies each term
// individually (its zeros kill single terms, not the tail), so the running
// product recursion tracks the factorial part and applies that factor per
// term.
PartialSumResult eval_vwp(const VwpSpec& spec, long long max_terms = 4000,
                          double tail_tol = 1e-14);

// Classification report for a spec with one more numerator than denominator
// parameter (s = r + 1).
struct BalanceReport {
  double balance_dev = 0.0;  // relative |prod t - q prod w| / |q prod w|
  bool balanced = false;     // balance_dev <= kClassifyTol
  bool well_poised = false;  // t_1 w_1 = ... = t_r w_r (ordered pairing)
  bool very_well_poised = false;  // well poised with the standard quadruple
                                  // q s, -q s, q s/sqrt(p), -q s sqrt(p)
                                  // (s = sqrt(t0), either branch) among the
                                  // last four numerator parameters
};

// Measures the balancing defect and classifies well-poisedness.  Requires
// s = r + 1 (ConstraintViolation otherwise).  Classification thresholds use
// kClassifyTol; the report never throws for generic parameters.
BalanceReport check_balancing(const SeriesSpec& spec);

// The ratio function H(u) of a spec with s = r + 1 and t_0 = q (checked to
// rel kBalanceTol; ConstraintViolation otherwise):
//
//   H(u) = prod_{k=1}^{r} theta(u t_k; p) / theta(u w_k; p).
//
// Equal to term_ratio_h(spec, n) at u = q^n.  Invariant under u -> p u when
// the spec is balanced.  Throws PoleHit on the zero lattice of a
// denominator factor.
cplx series_H(const SeriesSpec& spec, cplx u);

// Result of the closed-form summation available when q^b lands on the
// p-lattice.
struct RationalChiResult {
  cplx value{0.0, 0.0};
  cplx big_r{0.0, 0.0};  // R = prod_{k=0}^{b-1} H(q^k)
  double r_c = 0.0;      // radius of convergence |R|^{-1/b}
  long long lattice_exponent = 0;  // L with q^b = p^L
};

// Closed form of the series when the base satisfies q^b in p^Z:
//
//   value = [ 1 + sum_{l=1}^{b-1} prod_{k=0}^{l-1} H(q^k) z^l ]
//           / (1 - R z^b),        R = prod_{k=0}^{b-1} H(q^k).
//
// Preconditions: spec balanced with t_0 = q (Unbalanced /
// ConstraintViolation), gcd(a, b) = 1 with b >= 1 (ConstraintViolation),
// q^b = p^L to rel kBalanceTol for the nearest integer L
// (ConstraintViolation), and |R z^b| < 1 (OutsideRadius beyond the boundary
// band, OnBoundary within 1e-10 of |R z^b| = 1).
RationalChiResult rational_chi_sum(const SeriesSpec& spec, long long a,
                                   long long b, cplx z);

// Basic (p = 0) series evaluator:
//
//   sum_{n>=0} prod_m (t_m; q)_n / [ (q; q)_n prod_k (w_k; q)_n ] z^n,
//
// implemented directly on ordinary q-shifted factorials, independent of the
// theta machinery, so it can serve as a degeneration cross-check.  Stopping
// rules match eval_sEr.
PartialSumResult eval_qhyper(const std::vector<cplx>& t,
                             const std::vector<cplx>& w, cplx q, cplx z,
                             long long max_terms = 4000,
                             double tail_tol = 1e-14);

// First `count` coefficients c_0 .. c_{count-1} (z factored out), computed
// by the h(n) recursion.  Coefficients whose magnitude leaves double range
// overflow to inf honestly.
std::vector<cplx> series_coefficients(const SeriesSpec& spec,
                                      std::size_t count);

// The ratio function of the very-well-poised sum as a function of the orbit
// point u (the analogue of series_H):
//
//   H_vwp(u) = -q * theta(t0 q^2 u^2; p) / theta(t0 u^2; p)
//              * prod_{j=0}^{r-4} theta(t_j u; p) / theta(q t0 u / t_j; p),
//
// with j = 0 meaning t0.  The one-step term ratio of eval_vwp at index n is
// -H_vwp(q^n): the sum absorbs an alternating sign into its terms (it arises
// from the z = -1 evaluation point of the equivalent plain series), and the
// leading -q makes H_vwp the exact coefficient ratio of that plain series.
cplx vwp_H(const VwpSpec& spec, cplx u);

}  // namespace elliptheta
