#pragma once
// Radius of convergence of the theta-quotient series.
//
// The coefficient ratio H of a balanced spec is invariant under u -> p u,
// so along the orbit u = q^n, q = e^{2 pi i chi (N + M tau)} with irrational
// chi, the points equidistribute on the closed line u = e^{2 pi i x (N + M
// tau)}, x in [0, 1), and
//
//   log r_c^{-1} = lim (1/n) sum_{k<n} log|H(q^k)|
//                = int_0^1 log|H(e^{2 pi i x (N + M tau)})| dx.
//
// Each theta factor contributes a log_theta_line_mean term, and for balanced
// parameter families the dilogarithm pieces collapse to quadratic
// polynomials in the *fractional transverse positions* of the parameters
// (see fractional_position below).  This header exposes:
//
//   - the transverse/longitudinal coordinates of a parameter against the
//     line, and their inverse (the coordinate construction of parameters);
//   - the analytic radius formulas: general balanced (radius_balanced),
//     free-t0 extension (radius_singular), the paired well-poised form
//     (radius_wellpoised) together with a constructor of explicit r_c > 1
//     examples, and the very-well-poised form (radius_vwp);
//   - finite Weyl orbit averages (empirical_log_average) as the
//     independent empirical route, plus a sampled sup proxy;
//   - a continued-fraction probe for the slow-denominator-growth condition
//     the free-t0 extension assumes of chi.
//
// Conventions.  Complex-parameter routes reject parameters lying on the
// sampling line within kOnLineTol (OnLine) — the closed forms stay finite
// there, but the series itself is then one lattice hit away from a pole and
// the reported radius would be misleading.  The single exception is a
// parameter equal (to rel kClassifyTol) to q or to another distinguished
// parameter of the same spec: such coincidences are treated as exact intent
// and their positions are taken as exact integers/differences, which is
// consistent because the mean of log|theta| has only an integrable
// singularity across the line.  Coordinate routes (radius_wellpoised) take
// the positions as given — integer positions are honored verbatim.

#include <functional>
#include <vector>

#include "elliptheta/core.hpp"
#include "elliptheta/series.hpp"

namespace elliptheta {

// Fractional transverse positions this close to the lattice (in position
// units, i.e. distance from the nearest integer) count as "on the line".
inline constexpr double kOnLineTol = 1e-9;

// Evaluation route that produced a RadiusReport.
enum class RadiusMethod {
  balanced,      // fractional-position closed form, t_0 = q convention
  singular,      // same sum extended by the free-t_0 term (w_0 = q)
  wellpoised,    // transverse-coordinate form for a paired family
  vwp,           // very-well-poised ratio with the doubled-argument factor
  rational_chi,  // exact one-period geometric mean on a periodic orbit
  empirical,     // finite Weyl orbit average
};

struct RadiusReport {
  double log_rc_inv = 0.0;
  // Fractional transverse positions in [0, 1): alpha for denominator-side
  // parameters, beta for numerator-side ones, in spec order.
  std::vector<double> alpha;
  std::vector<double> beta;
  RadiusMethod method = RadiusMethod::balanced;
  // Partial averages (1/m) sum_{k<m} log|H| at the checkpoint lengths m
  // below; filled by the empirical route only.
  std::vector<double> empirical_trace;
  std::vector<long long> empirical_checkpoints;

  double r_c() const { return std::exp(-log_rc_inv); }
};

// Transverse coordinate phi of x against the line direction d = N + M tau:
//
//   phi = Re(conj(d) log x) / (2 pi Im tau),
//
// built on the principal branch of log x.  Moving x by a factor e^{2 pi i}
// (another branch) shifts phi by the integer M, and multiplying by p shifts
// it by -N, so the fractional part is branch- and lattice-invariant.
// Multiplying by q (or any point of the line) does not move phi at all.
double transverse_coordinate(cplx x, const LineSpec& line);

// Fractional transverse position {phi} in [0, 1).
double fractional_position(cplx x, const LineSpec& line);

// Longitudinal/transverse coordinate pair (h, phi) of the representation
//
//   x = q^h exp(phi * 2 pi Im tau / (N + M conj(tau))),
//
// extracted on the principal branch of log x:
//   h   = Im(conj(d) log x) / (2 pi chi |d|^2),
//   phi = Re(conj(d) log x) / (2 pi Im tau).
// The pair is unique only up to the lattice of branch shifts; the principal
// extraction inverts coordinate_point exactly when the constructed log x
// stays in the principal strip.
struct HphiCoordinates {
  double h = 0.0;
  double phi = 0.0;
};
HphiCoordinates hphi_extract(cplx x, const QSpec& base);

// Inverse construction: the parameter with coordinates (h, phi).  Built
// from base.log_q() directly (no complex logarithm), so the intended branch
// is exact by construction.
cplx coordinate_point(double h, double phi, const QSpec& base);

// Coordinates of a paired (well-poised) parameter family: numerator
// parameters t_j with coordinates (h_j, phi_j), denominator parameters w_j
// with (h_tilde_j, phi_tilde_j).  Pairing and balancing require
//
//   phi_j + phi_tilde_j and h_j + h_tilde_j constant over j,
//   sum phi_tilde = sum phi,  sum h_tilde = sum h
//
// (the constants are then 2/r times the common sums).  validate() checks
// all four to 1e-12 (ConstraintViolation).
struct WpParametrization {
  std::vector<double> h;
  std::vector<double> phi;
  std::vector<double> h_tilde;
  std::vector<double> phi_tilde;

  void validate() const;
};

// Analytic radius of a balanced spec with the t_0 = q convention:
//
//   log r_c^{-1} = sum_{k>=1} [ (log^2|t_k| - log^2|w_k|) / (4 pi Im tau)
//                  + pi Im tau / |N + M tau|^2
//                    * (a_k (a_k - 1) - b_k (b_k - 1)) ],
//
// a_k / b_k the fractional positions of w_k / t_k against the *primitive*
// line (the direction is reduced by its gcd internally; the result is
// invariant under that reduction, and reports use the reduced positions).
// Preconditions: spec balanced (Unbalanced), t_0 = q to rel kClassifyTol
// (ConstraintViolation; the free-t_0 case is radius_singular), q on the
// line (ConstraintViolation), parameters off the line (OnLine) except for
// exact q-coincidences as described above.
RadiusReport radius_balanced(const SeriesSpec& spec, const LineSpec& line);

// Extension with t_0 free: the k = 0 pair (t_0, w_0 = q) joins the sum with
// a_0 = 0 exactly.  Valid when chi additionally has slow continued-fraction
// denominator growth (see cf_growth_probe) — that keeps the orbit from
// approaching the w_0 zero lattice too fast; the caller asserts it.
// t_0 = q reduces to radius_balanced exactly (the k = 0 term cancels
// symbolically).
RadiusReport radius_singular(const SeriesSpec& spec, const LineSpec& line);

// Paired-family radius in transverse coordinates:
//
//   log r_c^{-1} = pi Im tau / |N + M tau|^2
//                  * sum_j ({phi_tilde_j} - {phi_j})
//                         * ({phi_tilde_j} + {phi_j} - 1).
//
// The log^2 terms of the general formula cancel against the pairing
// constraints, so only the positions matter.  When no phi wraps (all inputs
// already in [0, 1)) the constraints force the sum to vanish: r_c = 1.
// Requires a primitive direction (gcd(N, M) = 1, ConstraintViolation): the
// coordinates are interpreted against the line exactly as given.
RadiusReport radius_wellpoised(const WpParametrization& wp,
                               const LineSpec& line);

// Explicit family with r_c > 1: for eps = (k + 1) / (r/2 + lambda),
//
//   phi_1 = 1 + eps r / 2,   phi_2 = ... = phi_r = 1 - eps,
//
// paired by phi_tilde_j = (2/r) sum phi - phi_j, and longitudinal
// coordinates h as supplied (paired the same way).  The wrapped phi_1 makes
//
//   log r_c^{-1} = eps pi Im tau / |N + M tau|^2
//                  * (2 lambda + (2/r - 1)(2k + 4 - r)),
//
// which is negative for k = floor((r - 2) / 2) and small lambda.
// Preconditions: r > 2, 0 < lambda < 1 - 2/r, 0 <= k with k + 1 <= r/2,
// h.size() == r (ConstraintViolation).
struct WpExample {
  SeriesSpec spec;        // t = {q, t_1 .. t_r}, w = {w_1 .. w_r}
  WpParametrization wp;   // the generating coordinates
  RadiusReport report;    // radius_wellpoised of wp
};
WpExample construct_wp_example(int r, int k, double lambda, const QSpec& base,
                               const std::vector<double>& h);

// Radius of the very-well-poised sum (coefficient ratio vwp_H):
//
//   log r_c^{-1} = pi Im tau / |N + M tau|^2
//                  * sum_{k=0}^{r-4} ({phi_tilde_k} - {phi_k})
//                                  * ({phi_tilde_k} + {phi_k} - 1),
//
// phi_k the position of t_k (k = 0 meaning t0), phi_tilde_k that of
// q t0 / t_k, and phi_tilde_0 = 0 by the w_0 = q convention.  The
// doubled-argument factor theta(t0 q^2 u^2)/theta(t0 u^2) contributes its
// mean over the doubled line (2N, 2M); assembling that through the gcd
// correction cancels the explicit log|q| of the ratio exactly, which is why
// no log|q| term survives here — in particular a family with no wrapped
// positions has r_c = 1, not |q|^{-M}.  Requires a primitive direction and
// t0 off the line; a parameter t_k equal to q (pair (q, t0)) or to t0
// (pair (t0, q)) is handled as exact intent.
RadiusReport radius_vwp(const VwpSpec& spec, const LineSpec& line);

// Finite Weyl orbit average of log|H| with H the coefficient ratio of the
// spec: series_H when t_0 = q, the general ratio otherwise.  Balancing is
// required (Unbalanced): it makes H invariant under u -> p u, so the orbit
// is sampled at the reduced representatives u_k = e^{2 pi i {k chi} (N + M
// tau)}, which never leave double range (q^k itself underflows near k ~
// 190 already for tau = i).  Partial averages are recorded at checkpoint
// lengths 1, 2, 5, 10, 20, 50, ... and at n itself.  A theta zero or pole
// met on the orbit raises PoleProximity naming the offending index.
RadiusReport empirical_log_average(const SeriesSpec& spec, const QSpec& base,
                                   long long n);

// Same average for a caller-supplied ratio function.  H must be invariant
// under u -> p u (the reduced representatives stand in for q^k).
RadiusReport empirical_log_average(const std::function<cplx(cplx)>& H,
                                   const QSpec& base, long long n);

// Sampled sup of log|H| over the same reduced orbit: exp of the result
// bounds the coefficient ratio on the sampled range, giving the crude bound
// r_c >= exp(-result).  A finite sample cannot certify the true sup; this
// is a diagnostic, not a bound.
double orbit_log_sup(const std::function<cplx(cplx)>& H, const QSpec& base,
                     long long n);

// Continued-fraction probe for the slow-denominator-growth condition
// limsup_k log(q_{k+1}) / q_k = 0 on the convergent denominators q_k of
// chi.  A finite expansion can neither confirm nor refute a limsup; the
// report carries the raw data plus two proxies and says so.
struct CfGrowthReport {
  std::vector<double> denominators;  // q_0 = 1, q_1, ... (exact integers)
  std::vector<double> log_ratios;    // log(q_{k+1}) / q_k, consecutive pairs
  double max_log_ratio = 0.0;        // over the whole computed range
  double tail_log_ratio = 0.0;       // over the trailing half of the range
  bool terminated = false;   // expansion ended: chi is (numerically) rational
  bool growth_flag = false;  // tail proxy exceeded kCfGrowthThreshold and the
                             // expansion did not terminate
};

// The early denominators of *every* chi are small, so the global max never
// separates slow from fast growth; the flag therefore looks at the trailing
// half of the computed ratios.  The threshold sits between the slowest
// decay reachable within the double-precision depth limit (the golden
// ratio's tail, ~0.026 at depth 24) and the plateau of a genuinely spiky
// expansion (~0.5 for 0.110001 at depth 3).
inline constexpr double kCfGrowthThreshold = 0.1;

// Expands frac(chi) to at most `depth` partial quotients (1 <= depth <= 60,
// ConstraintViolation).  Denominators beyond sqrt(1/eps) ~ 6.7e7 would be
// artifacts of the binary representation of chi rather than properties of
// the intended real number; reaching them raises PrecisionExhausted.
CfGrowthReport cf_growth_probe(double chi, int depth);

}  // namespace elliptheta
