#pragma once

#include <utility>

#include "elliptheta/core.hpp"

// Multiplicative Jacobi theta function and friends.
//
//   theta(z; p) = prod_{n>=0} (1 - z p^n)(1 - p^{n+1}/z),        0 < |p| < 1,
//
// with the degenerate trigonometric limit theta(z; 0) = 1 - z.  The function
// obeys
//
//   theta(z; p) = theta(p/z; p) = -z * theta(p z; p)       (reflection/shift)
//   theta(p^k z; p) = (-z)^{-k} p^{-k(k-1)/2} theta(z; p)  (iterated shift)
//
// and vanishes exactly on the lattice z in p^Z.  The bilateral series form
//
//   theta(z; p) = (1/(p;p)_inf) * sum_{n in Z} p^{n(n-1)/2} (-z)^n
//
// is provided separately (theta_sum) as an independent evaluation route.
//
// Magnitudes of theta quotients along q-power orbits overflow doubles very
// quickly, so the workhorse is theta_scaled(), which reduces the argument
// into the annulus sqrt|p| <= |u| < 1/sqrt|p| via the iterated shift and
// returns a mantissa/exponent pair plus the relative magnitude used for
// zero-snapping and pole-proximity guards.

namespace elliptheta {

// Relative magnitude below which a computed theta value is declared an exact
// lattice zero.
inline constexpr double kThetaZeroSnap = 1e-13;
// Relative magnitude below which a *denominator* theta is treated as a pole.
inline constexpr double kPoleProximity = 1e-12;

struct ThetaEval {
  ScaledC value;  // theta(z; p), possibly with a large/small exponent
  double rel;     // |theta| / (running scale of the partial products)
};

// prod_{n>=0} (1 - a p^n).  Truncates once |a p^n| < abs_tol * (1 - |p|),
// which bounds the log of the remaining tail by abs_tol.
cplx qpochhammer_inf(cplx a, cplx p, const TruncationPolicy& policy = {});

// Scaled evaluation with lattice reduction; the only route that is safe for
// arguments far from the unit annulus.
ThetaEval theta_scaled(cplx z, cplx p, const TruncationPolicy& policy = {});

// Plain evaluation.  Returns exactly 0 when z lies on the zero lattice p^Z
// (relative magnitude below kThetaZeroSnap); may return inf for arguments so
// deep in the lattice that the true value exceeds double range.
cplx theta(cplx z, cplx p, const TruncationPolicy& policy = {});

// log |theta(z; p)|, finite for any z off the zero lattice; -inf on it.
double log_abs_theta(cplx z, cplx p, const TruncationPolicy& policy = {});

// Bilateral triple-product series route (independent of the product form).
cplx theta_sum(cplx z, cplx p, const TruncationPolicy& policy = {});

// (-z)^{-k} p^{-k(k-1)/2} theta(z; p): the iterated-shift prediction for
// theta(p^k z; p).
cplx theta_shift(cplx z, cplx p, long long k, const TruncationPolicy& policy = {});

// Elliptic shifted factorial: prod_{m=0}^{n-1} theta(t q^m; p), n >= 0.
cplx elliptic_pochhammer(cplx t, cplx p, cplx q, int n,
                         const TruncationPolicy& policy = {});
ScaledC elliptic_pochhammer_scaled(cplx t, cplx p, cplx q, int n,
                                   const TruncationPolicy& policy = {});

// Modular transformation cross-check.  Returns the pair
//   lhs = theta(e^{-2 pi i u / w1}; e^{-2 pi i w2 / w1})
//   rhs = e^{ i pi B22(u; w1, w2) } theta(e^{2 pi i u / w2}; e^{2 pi i w1 / w2})
// which agree identically; both nomes must lie inside the unit disc.
std::pair<cplx, cplx> modular_check(cplx u, cplx w1, cplx w2,
                                    const TruncationPolicy& policy = {});

// Second-order multiple Bernoulli polynomial entering the modular law.
cplx bernoulli_b22(cplx u, cplx w1, cplx w2);

}  // namespace elliptheta
