#include "elliptheta/phi.hpp"

#include <cmath>

namespace elliptheta {

namespace {

void validate_params(const std::vector<cplx>& s, cplx p) {
  if (s.empty()) throw ConstraintViolation("phi: empty parameter vector");
  for (const cplx& v : s) {
    if (v == cplx{0.0, 0.0}) throw ZeroArgument("phi: s_j = 0");
  }
  if (!(std::abs(p) < 1.0)) throw DivergedModulus("phi: |p| >= 1");
}

// Window sum over the simplex slice m_1 + ... + m_r = n, |m_j| <= R.
// Coordinates 1..r-1 are enumerated; the last is forced.  Each level keeps
// its factor (-s_j)^{m_j} p^{binom(m_j,2)} in scaled form and steps it
// multiplicatively, so deep windows neither overflow nor underflow.
cplx phi_n_window(const std::vector<cplx>& s, cplx p, long long n, int R) {
  const int r = static_cast<int>(s.size());
  if (r == 1) {
    if (std::llabs(n) > R) return {0.0, 0.0};
    return (scaled_ipow(-s[0], n) * scaled_ipow(p, binom2(n))).to_complex();
  }
  KahanSum total;
  // Iterative odometer over m_1..m_{r-1}.
  std::vector<long long> m(r - 1, -R);
  std::vector<ScaledC> pref(r);  // pref[j] = product of factors for m_1..m_j
  pref[0] = ScaledC::from(cplx{1.0, 0.0});
  auto level_factor = [&](int j, long long mj) {
    return scaled_ipow(-s[j], mj) * scaled_ipow(p, binom2(mj));
  };
  // Initialize prefix products at m_j = -R.
  for (int j = 0; j < r - 1; ++j) {
    pref[j + 1] = pref[j] * level_factor(j, -R);
  }
  const cplx s_last = s[r - 1];
  while (true) {
    long long sum_m = 0;
    for (long long v : m) sum_m += v;
    long long m_last = n - sum_m;
    if (std::llabs(m_last) <= R) {
      ScaledC term =
          pref[r - 1] * scaled_ipow(-s_last, m_last) * scaled_ipow(p, binom2(m_last));
      total.add(term.to_complex());
    }
    // Advance the odometer (last enumerated coordinate fastest).
    int j = r - 2;
    while (j >= 0 && m[j] == R) {
      m[j] = -R;
      --j;
    }
    if (j < 0) break;
    ++m[j];
    pref[j + 1] = pref[j] * level_factor(j, m[j]);
    for (int k = j + 1; k < r - 1; ++k) {
      pref[k + 1] = pref[k] * level_factor(k, m[k]);
    }
  }
  return total.value();
}

}  // namespace

void PhiRequest::validate() const {
  validate_params(s, p);
  if (lattice_radius < std::llabs(n) + 2) {
    throw ConstraintViolation("PhiRequest: lattice_radius < |n| + 2");
  }
}

cplx phi_n_lattice(const PhiRequest& req) {
  req.validate();
  cplx v1 = phi_n_window(req.s, req.p, req.n, req.lattice_radius);
  cplx v2 = phi_n_window(req.s, req.p, req.n, req.lattice_radius + 2);
  double scale = std::max({std::abs(v1), std::abs(v2), 1e-300});
  if (std::abs(v1 - v2) > 1e-12 * scale) {
    throw NotConverged("phi_n_lattice: window not stable under radius + 2");
  }
  return v2;
}

cplx phi_n_auto(const std::vector<cplx>& s, cplx p, long long n) {
  validate_params(s, p);
  int R = static_cast<int>(std::llabs(n)) + 6;
  cplx prev = phi_n_window(s, p, n, R);
  for (int iter = 0; iter < 8; ++iter) {
    int R2 = R + 2;
    cplx next = phi_n_window(s, p, n, R2);
    double scale = std::max({std::abs(prev), std::abs(next), 1e-300});
    if (std::abs(prev - next) <= 1e-12 * scale) return next;
    R *= 2;
    prev = phi_n_window(s, p, n, R);
  }
  throw NotConverged("phi_n_auto: lattice sum did not stabilize");
}

namespace {

// Single evaluation of the root-of-unity closed form at auxiliary point z.
// Throws SingularAuxiliary when the denominator theta vanishes.
cplx phi0_eval(const std::vector<cplx>& s, cplx p, cplx z) {
  const int r = static_cast<int>(s.size());
  const cplx zeta = std::exp(kTwoPi * kI / double(r));
  cplx s_prod{1.0, 0.0};
  for (const cplx& v : s) s_prod *= v;
  cplx pr = ipow(p, r);
  cplx den = theta(-ipow(-z, r) * s_prod, pr);
  if (den == cplx{0.0, 0.0}) {
    throw SingularAuxiliary("phi0_closed: auxiliary point on denominator zero");
  }
  KahanSum num;
  for (int m = 0; m < r; ++m) {
    ScaledC prod = ScaledC::from(cplx{1.0, 0.0});
    cplx zm = z * ipow(zeta, m);
    for (const cplx& v : s) prod = prod * theta_scaled(v * zm, p).value;
    num.add(prod.to_complex());
  }
  cplx pp = qpochhammer_inf(p, p);
  cplx ppr = qpochhammer_inf(pr, pr);
  return ipow(pp, r) / (double(r) * ppr) * num.value() / den;
}

}  // namespace

cplx phi0_closed(const std::vector<cplx>& s, cplx p, cplx z_aux) {
  validate_params(s, p);
  if (z_aux == cplx{0.0, 0.0}) throw ZeroArgument("phi0_closed: z_aux = 0");
  if (p == cplx{0.0, 0.0}) {
    // Trigonometric limit: only the all-zero lattice point contributes.
    return {1.0, 0.0};
  }
  const cplx spin = std::exp(cplx{0.0, 0.37});
  cplx v1;
  cplx z1 = z_aux;
  try {
    v1 = phi0_eval(s, p, z1);
  } catch (const SingularAuxiliary&) {
    z1 = z_aux * spin;
    v1 = phi0_eval(s, p, z1);
  }
  // Independence of the auxiliary point is part of the contract; verify at a
  // second generic point.
  cplx z2 = z1 * 1.13 * spin;
  cplx v2;
  try {
    v2 = phi0_eval(s, p, z2);
  } catch (const SingularAuxiliary&) {
    z2 = z1 * 1.21 * spin * spin;
    v2 = phi0_eval(s, p, z2);
  }
  double scale = std::max({std::abs(v1), std::abs(v2), 1e-300});
  if (std::abs(v1 - v2) > 1e-8 * scale) {
    throw SingularAuxiliary("phi0_closed: auxiliary-point dependence detected");
  }
  return v1;
}

cplx phi_shift(const PhiRequest& req, int j) {
  req.validate();
  if (j < 0 || j >= static_cast<int>(req.s.size())) {
    throw ConstraintViolation("phi_shift: parameter index out of range");
  }
  std::vector<cplx> shifted = req.s;
  shifted[j] *= std::exp(double(req.n) * std::log(req.p));  // s_j p^n exactly
  ScaledC front = scaled_ipow(req.p, binom2(req.n)) * scaled_ipow(-req.s[j], req.n);
  return (front * ScaledC::from(phi0_closed(shifted, req.p))).to_complex();
}

}  // namespace elliptheta
