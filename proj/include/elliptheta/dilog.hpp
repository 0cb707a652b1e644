#pragma once
// Dilogarithm on the closed unit disk and its circle-boundary pieces.
//
//   Li2(x) = sum_{n>=1} x^n / n^2,  |x| <= 1.
//
// On the unit circle the real part is an exact quadratic (the periodic
// second Bernoulli polynomial),
//
//   Re Li2(e^{ia}) = a^2/4 - pi a/2 + pi^2/6,  a reduced into [0, 2pi),
//
// and the imaginary part is the Clausen function Cl2(a) = sum sin(na)/n^2,
// evaluated through its logarithm-split expansion in even zeta values
// (convergent for |a| < 2pi, used on [0, pi] plus odd symmetry).

#include <complex>

#include "elliptheta/core.hpp"
#include "elliptheta/errors.hpp"

namespace elliptheta {

// zeta(2k) for even arguments >= 2 (Euler-Maclaurin tail corrections).
double zeta_even(int two_k);

// Re Li2(e^{i arg}); arg is reduced mod 2pi into [0, 2pi) first.
double dilog_circle_re(double arg);

// Im Li2(e^{i arg}) = Cl2(arg).
double clausen2(double arg);

// Li2 on the closed unit disk.  Interior points use the plain power series
// with the tail bound |x|^{K+1}/K^2 * 1/(1-|x|); moduli within 1e-13 of 1
// are treated as boundary points via the two circle formulas above.  The
// thin ring where the series needs more than max_terms terms (roughly
// 0.999 < |x| < 1 - 1e-13 at default tolerance) raises NotConverged.
cplx dilog(cplx x, double tol = 1e-14, long long max_terms = 20000);

}  // namespace elliptheta
