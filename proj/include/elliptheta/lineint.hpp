#pragma once
// Mean values of log|.| along the exponential line x -> t e^{2pi i x (N+M tau)}.
//
//   log_one_minus_line_integral:  int_0^inf log|1 - t e^{2pi i x (N+M tau)}| dx,
//                                 M > 0 (the factor decays, so the tail dies);
//   log_theta_line_mean:          int_0^1 log|theta(t e^{2pi i x (N+M tau)}; p)| dx.
//
// Both have dilogarithm closed forms.  The transverse position of t against
// the line is the unit-modulus coordinate
//
//   mu(t) = e^{i arg t} e^{i (N + M Re tau) log|t| / (M Im tau)},
//
// which satisfies mu(1/t) = conj(mu(t)) and mu(t p^k) = mu(t) e^{-2pi i k N/M}.
// The *_quad routines integrate the defining integrals numerically and exist
// as a deliberately independent evaluation route; keep both.

#include "elliptheta/core.hpp"
#include "elliptheta/dilog.hpp"
#include "elliptheta/quadrature.hpp"

namespace elliptheta {

// Unit-modulus transverse coordinate of t relative to the line (needs M != 0).
cplx mu_unit(cplx t, const LineSpec& line);

// Angle of mu_unit without the final exp (useful at integer powers).
double mu_angle(cplx t, const LineSpec& line);

// Closed form of the [0, inf) integral (M > 0).  For |t| within 1e-13 of 1
// the two branch formulas are both evaluated and must agree to 1e-10.
double log_one_minus_line_integral(cplx t, const LineSpec& line);

// Closed form of the [0, 1] theta mean, all (N, M) != (0, 0):
// M > 0 general dilogarithm form, M = 0 degenerate form, M < 0 via the
// substitution x -> 1-x which lands on the line (-N, -M) at t p^M.
double log_theta_line_mean(cplx t, const LineSpec& line);

// Direct numerical evaluation of the defining integrals (independent route).
QuadResult log_one_minus_line_quad(cplx t, const LineSpec& line,
                                   double abs_tol = 1e-8);
QuadResult log_theta_line_quad(cplx t, const LineSpec& line,
                               double abs_tol = 1e-8);

}  // namespace elliptheta
