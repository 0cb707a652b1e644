#pragma once

#include <vector>

#include "elliptheta/theta.hpp"

// Lattice coefficients of products of theta functions.
//
// For parameters s_1..s_r (all nonzero) and nome p, define
//
//   Phi_n(s; p) = sum over (m_1..m_r) in Z^r with m_1+...+m_r = n of
//                 prod_j (-s_j)^{m_j} * p^{ sum_j binom(m_j, 2) }.
//
// These are the Laurent coefficients of the product:
//
//   prod_j theta(s_j z; p) = (1/(p;p)_inf^r) * sum_{n in Z} z^n Phi_n(s; p),
//
// and satisfy three structural identities:
//
//   (1) Phi_n(s; p) = p^{binom(n,2)} (-s_j)^n Phi_0(..., s_j p^n, ...; p)
//   (2) Phi_{n+r}(s; p) = (-1)^r s_1...s_r p^n Phi_n(s; p)
//   (3) a closed form for Phi_0 as a root-of-unity average of theta
//       products over an auxiliary point z (independent of that point):
//
//       Phi_0(s; p) = (1/r) * (p;p)_inf^r / (p^r;p^r)_inf
//                     * sum_{m=0}^{r-1} prod_j theta(s_j z zeta^m; p)
//                     / theta( -(-z)^r s_1...s_r ; p^r ),   zeta = e^{2 pi i / r}.
//
// For r = 2 the closed form collapses to
//   Phi_0(s1, s2; p) = (p^2;p^2)_inf * theta(-p s1/s2; p^2).

namespace elliptheta {

struct PhiRequest {
  std::vector<cplx> s;    // r >= 1 nonzero parameters
  cplx p;                 // |p| < 1
  long long n = 0;        // target total degree
  int lattice_radius = 8; // per-coordinate window; must be >= |n| + 2

  void validate() const;
};

// Direct window sum over |m_j| <= lattice_radius.  Also evaluates the window
// enlarged by 2 and raises NotConverged unless the two agree to rel 1e-12.
cplx phi_n_lattice(const PhiRequest& req);

// Window-free variant: starts at |n| + 6 and doubles the radius until two
// consecutive evaluations agree.
cplx phi_n_auto(const std::vector<cplx>& s, cplx p, long long n);

// Root-of-unity closed form for Phi_0.  The auxiliary point must avoid the
// zero set of the denominator theta; on a hit the point is rotated by
// e^{0.37 i} once and the evaluation retried.  The result is validated
// against a second generic auxiliary point (rel 1e-8).
cplx phi0_closed(const std::vector<cplx>& s, cplx p, cplx z_aux = cplx{1.0, 0.0});

// Identity (1) route: Phi_n computed from the closed-form Phi_0 with the
// j-th parameter shifted onto s_j p^n.
cplx phi_shift(const PhiRequest& req, int j);

}  // namespace elliptheta
