#include "elliptheta/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace elliptheta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Term magnitudes beyond exp(668) ~ 1e290 only overflow downstream; the
// evaluators cut the loop there and report non-convergence.
constexpr double kBlowupLog = 668.0;

std::string at_step(long long n) { return " at step n = " + std::to_string(n); }

// One theta factor destined for a denominator: tiny relative magnitude means
// the parameter orbit ran into the zero lattice, which is a pole of the
// series coefficient, not a value.
ScaledC denominator_theta(cplx arg, cplx p, const std::string& what,
                          long long n) {
  ThetaEval ev = theta_scaled(arg, p);
  if (ev.rel < kPoleProximity) {
    throw PoleHit("series: denominator factor " + what + " vanishes" +
                  at_step(n));
  }
  return ev.value;
}

struct RatioParts {
  ScaledC value;        // h at the requested point (meaningless if zero)
  bool numerator_zero;  // an exact numerator theta zero was hit
  std::size_t zero_index;
};

// Identical up to a few ulp: used to cancel coincident numerator /
// denominator parameters symbolically.
bool nearly_same(cplx a, cplx b) {
  return std::abs(a - b) <=
         8.0 * std::numeric_limits<double>::epsilon() *
             std::max(std::abs(a), std::abs(b));
}

// h as a function of the orbit point u; n only labels error messages.
//
// A numerator parameter equal to a denominator parameter (most commonly the
// conventional t_0 = q normalization) contributes theta(x)/theta(x) = 1 and
// is cancelled before evaluation.  Without this the pair would hit the zero
// lattice simultaneously whenever the shared value lands on it — e.g. every
// b-th step when q^b is a power of p — and a 0/0 would masquerade as
// termination.
RatioParts ratio_parts(const SeriesSpec& spec, cplx u, long long n) {
  const cplx p = spec.nome.p;
  std::vector<char> t_skip(spec.t.size(), 0);
  bool q_cancelled = false;
  std::vector<char> w_skip(spec.w.size(), 0);
  for (std::size_t m = 0; m < spec.t.size(); ++m) {
    if (!q_cancelled && nearly_same(spec.t[m], spec.q)) {
      t_skip[m] = 1;
      q_cancelled = true;
      continue;
    }
    for (std::size_t k = 0; k < spec.w.size(); ++k) {
      if (!w_skip[k] && nearly_same(spec.t[m], spec.w[k])) {
        t_skip[m] = 1;
        w_skip[k] = 1;
        break;
      }
    }
  }

  RatioParts out{ScaledC::from(cplx{1.0, 0.0}), false, 0};
  for (std::size_t m = 0; m < spec.t.size(); ++m) {
    if (t_skip[m]) continue;
    ThetaEval ev = theta_scaled(spec.t[m] * u, p);
    if (ev.rel < kThetaZeroSnap) {
      out.numerator_zero = true;
      out.zero_index = m;
      return out;
    }
    out.value = out.value * ev.value;
  }
  if (!q_cancelled) {
    out.value =
        out.value / denominator_theta(spec.q * u, p, "theta(q^{n+1}; p)", n);
  }
  for (std::size_t k = 0; k < spec.w.size(); ++k) {
    if (w_skip[k]) continue;
    out.value = out.value /
                denominator_theta(spec.w[k] * u, p,
                                  "theta(w_" + std::to_string(k + 1) +
                                      " q^n; p)",
                                  n);
  }
  return out;
}

void require_nonzero(cplx v, const char* what) {
  if (v == cplx{0.0, 0.0}) throw ZeroArgument(std::string("series: ") + what);
}

// Shared tail bookkeeping: a term was just added; decide whether five
// consecutive strictly decreasing magnitudes below tail_tol have been seen.
struct TailWatch {
  double prev = kInf;
  int streak = 0;
  bool settled(double mag, double tail_tol) {
    if (mag < tail_tol && mag < prev) {
      ++streak;
    } else {
      streak = 0;
    }
    prev = mag;
    return streak >= 5;
  }
};

}  // namespace

void SeriesSpec::validate() const {
  nome.validate();
  require_nonzero(q, "q = 0");
  for (const cplx& tm : t) require_nonzero(tm, "numerator parameter = 0");
  for (const cplx& wk : w) require_nonzero(wk, "denominator parameter = 0");
}

void VwpSpec::validate() const {
  nome.validate();
  require_nonzero(q, "q = 0");
  require_nonzero(t0, "t0 = 0");
  for (const cplx& tm : t) require_nonzero(tm, "parameter = 0");
  if (nu != 1 && nu != -1) {
    throw ConstraintViolation("VwpSpec: nu must be +1 or -1");
  }
  const long long r = static_cast<long long>(order());
  if (r % 2 == 1 && nu != 1) {
    throw ConstraintViolation("VwpSpec: nu = 1 is required for odd order");
  }
  cplx lhs{1.0, 0.0};
  for (const cplx& tm : t) lhs *= tm;
  cplx rhs;
  if ((r - 5) % 2 == 0) {
    rhs = double(nu) * ipow(t0, (r - 5) / 2) * ipow(q, (r - 7) / 2);
  } else {
    // Half-integer powers: principal branches.
    rhs = double(nu) * std::exp(0.5 * double(r - 5) * std::log(t0) +
                                0.5 * double(r - 7) * std::log(q));
  }
  if (std::abs(lhs - rhs) > kBalanceTol * std::abs(rhs)) {
    throw Unbalanced("VwpSpec: parameter product violates the balancing "
                     "constraint (rel dev " +
                     std::to_string(std::abs(lhs - rhs) / std::abs(rhs)) +
                     ")");
  }
}

cplx term_ratio_at(const SeriesSpec& spec, cplx u) {
  spec.validate();
  require_nonzero(u, "term ratio at u = 0");
  RatioParts parts = ratio_parts(spec, u, -1);
  if (parts.numerator_zero) return {0.0, 0.0};
  return parts.value.to_complex();
}

cplx term_ratio_h(const SeriesSpec& spec, long long n) {
  spec.validate();
  cplx u = ipow(spec.q, n);
  require_nonzero(u, "q^n underflowed to 0");
  RatioParts parts = ratio_parts(spec, u, n);
  if (parts.numerator_zero) return {0.0, 0.0};
  return parts.value.to_complex();
}

PartialSumResult eval_sEr(const SeriesSpec& spec, cplx z, long long max_terms,
                          double tail_tol) {
  spec.validate();
  if (max_terms < 1) {
    throw ConstraintViolation("eval_sEr: max_terms must be >= 1");
  }
  PartialSumResult res;
  KahanSum sum;
  sum.add(cplx{1.0, 0.0});  // c_0 = 1
  res.terms_used = 1;
  res.last_term_magnitude = 1.0;
  if (z == cplx{0.0, 0.0}) {
    res.value = cplx{1.0, 0.0};
    return res;
  }
  res.converged = false;

  ScaledC term = ScaledC::from(cplx{1.0, 0.0});  // c_n z^n
  const ScaledC zs = ScaledC::from(z);
  cplx qn{1.0, 0.0};  // q^n
  TailWatch tail;

  for (long long n = 0; n + 1 < max_terms; ++n) {
    RatioParts h = ratio_parts(spec, qn, n);
    if (h.numerator_zero) {
      // theta(t_i q^n; p) = 0 zeroes this and every later coefficient.
      res.terminated = true;
      res.converged = true;
      res.term_log_ratios.push_back(-kInf);
      break;
    }
    ScaledC next = term * h.value * zs;
    res.term_log_ratios.push_back(next.log_abs() - term.log_abs());
    term = next;
    if (term.log_abs() > kBlowupLog) break;  // diverging violently
    sum.add(term.to_complex());
    ++res.terms_used;
    double mag = std::exp(term.log_abs());
    res.last_term_magnitude = mag;
    if (tail.settled(mag, tail_tol)) {
      res.converged = true;
      break;
    }
    qn *= spec.q;
    // q^n leaving double range (either end) would poison the thetas; stop
    // with the honest non-convergence flag instead.
    if (qn == cplx{0.0, 0.0} || !std::isfinite(qn.real()) ||
        !std::isfinite(qn.imag())) {
      break;
    }
  }
  res.value = sum.value();
  return res;
}

PartialSumResult eval_vwp(const VwpSpec& spec, long long max_terms,
                          double tail_tol) {
  spec.validate();
  if (max_terms < 1) {
    throw ConstraintViolation("eval_vwp: max_terms must be >= 1");
  }
  const cplx p = spec.nome.p;
  const cplx q = spec.q;

  // Parameters t_0 .. t_{r-4} with the m = 0 slot holding t0 itself.
  std::vector<cplx> tt;
  tt.reserve(spec.t.size() + 1);
  tt.push_back(spec.t0);
  tt.insert(tt.end(), spec.t.begin(), spec.t.end());

  const ScaledC th0 =
      denominator_theta(spec.t0, p, "theta(t0; p)", 0);  // term prefactor base

  PartialSumResult res;
  KahanSum sum;
  sum.add(cplx{1.0, 0.0});  // n = 0 term: empty products, prefactor 1
  res.terms_used = 1;
  res.last_term_magnitude = 1.0;
  res.converged = false;

  ScaledC fact = ScaledC::from(cplx{1.0, 0.0});  // running factorial part
  ScaledC qpow = ScaledC::from(cplx{1.0, 0.0});  // q^n
  cplx qn{1.0, 0.0};                             // q^n (plain)
  cplx q2n2 = q * q;                             // q^{2(n+1)}
  double prev_log = 0.0;                         // log of previous |term|
  TailWatch tail;

  for (long long n = 0; n + 1 < max_terms; ++n) {
    // Advance the factorial part from index n to n + 1.
    bool terminated = false;
    for (std::size_t m = 0; m < tt.size(); ++m) {
      ThetaEval ev = theta_scaled(tt[m] * qn, p);
      if (ev.rel < kThetaZeroSnap) {
        terminated = true;  // permanent: this factor stays in every later term
        break;
      }
      fact = fact * ev.value;
      fact = fact / denominator_theta(q * spec.t0 * qn / tt[m], p,
                                      "theta(q t0 q^n / t_" +
                                          std::to_string(m) + "; p)",
                                      n);
    }
    if (terminated) {
      res.terminated = true;
      res.converged = true;
      res.term_log_ratios.push_back(-kInf);
      break;
    }
    qpow = qpow * q;

    // Per-term prefactor theta(t0 q^{2(n+1)}; p) / theta(t0; p): its zeros
    // kill single terms only, so they do not terminate the loop.
    ThetaEval pre = theta_scaled(spec.t0 * q2n2, p);
    ScaledC term = (pre.rel < kThetaZeroSnap)
                       ? ScaledC::zero()
                       : fact * pre.value / th0 * qpow;

    double cur_log = term.log_abs();
    res.term_log_ratios.push_back(cur_log - prev_log);
    prev_log = cur_log;
    if (cur_log > kBlowupLog) break;
    sum.add(term.to_complex());
    ++res.terms_used;
    double mag = term.is_zero() ? 0.0 : std::exp(cur_log);
    res.last_term_magnitude = mag;
    if (tail.settled(mag, tail_tol)) {
      res.converged = true;
      break;
    }
    qn *= q;
    q2n2 *= q * q;
    if (qn == cplx{0.0, 0.0} || q2n2 == cplx{0.0, 0.0} ||
        !std::isfinite(qn.real()) || !std::isfinite(qn.imag())) {
      break;
    }
  }
  res.value = sum.value();
  return res;
}

BalanceReport check_balancing(const SeriesSpec& spec) {
  spec.validate();
  if (spec.t.size() != spec.w.size() + 1) {
    throw ConstraintViolation(
        "check_balancing: requires one more numerator than denominator "
        "parameter (s = r + 1)");
  }
  BalanceReport rep;
  ScaledC pt = ScaledC::from(cplx{1.0, 0.0});
  for (const cplx& tm : spec.t) pt = pt * tm;
  ScaledC pw = ScaledC::from(spec.q);
  for (const cplx& wk : spec.w) pw = pw * wk;
  rep.balance_dev = std::abs((pt / pw).to_complex() - cplx{1.0, 0.0});
  rep.balanced = rep.balance_dev <= kClassifyTol;

  const std::size_t r = spec.w.size();
  if (r == 0) return rep;

  // Well-poised: all pair products t_j w_j (j >= 1) agree.
  cplx common = spec.t[1] * spec.w[0];
  bool wp = true;
  for (std::size_t j = 1; j < r; ++j) {
    if (std::abs(spec.t[j + 1] * spec.w[j] - common) >
        kClassifyTol * std::abs(common)) {
      wp = false;
      break;
    }
  }
  rep.well_poised = wp;
  if (!wp || r < 4) return rep;

  // Very-well-poised: additionally the pair products equal q t0 and the last
  // four numerator parameters form the standard quadruple.  Their squares
  // identify them regardless of square-root branches; the sign conditions
  // pin the branches to a combination that actually reproduces the
  // very-well-poised term structure.
  const cplx t0 = spec.t[0];
  const cplx qt0 = spec.q * t0;
  if (std::abs(common - qt0) > kClassifyTol * std::abs(qt0)) return rep;
  const cplx p = spec.nome.p;
  if (p == cplx{0.0, 0.0}) return rep;

  std::vector<cplx> last4(spec.t.end() - 4, spec.t.end());
  const cplx q2t0 = spec.q * spec.q * t0;
  auto sq_is = [&](cplx x, cplx target) {
    return std::abs(x * x - target) <= kClassifyTol * std::abs(target);
  };
  // Locate the +-q sqrt(t0) pair and the p-shifted pair by their squares.
  std::vector<int> plain, shifted_down, shifted_up;
  for (int i = 0; i < 4; ++i) {
    if (sq_is(last4[i], q2t0)) {
      plain.push_back(i);
    } else if (sq_is(last4[i], q2t0 / p)) {
      shifted_down.push_back(i);
    } else if (sq_is(last4[i], q2t0 * p)) {
      shifted_up.push_back(i);
    } else {
      return rep;
    }
  }
  if (plain.size() != 2 || shifted_down.size() != 1 || shifted_up.size() != 1) {
    return rep;
  }
  // Opposite signs within the plain pair; the shifted pair must multiply to
  // -q^2 t0 for the term identity to hold.
  cplx a = last4[plain[0]], b = last4[plain[1]];
  if (std::abs(a + b) > kClassifyTol * std::abs(a)) return rep;
  cplx uv = last4[shifted_down[0]] * last4[shifted_up[0]];
  if (std::abs(uv + q2t0) > kClassifyTol * std::abs(q2t0)) return rep;
  rep.very_well_poised = true;
  return rep;
}

cplx series_H(const SeriesSpec& spec, cplx u) {
  spec.validate();
  require_nonzero(u, "H evaluated at u = 0");
  if (spec.t.size() != spec.w.size() + 1) {
    throw ConstraintViolation(
        "series_H: requires one more numerator than denominator parameter");
  }
  if (std::abs(spec.t[0] - spec.q) > kBalanceTol * std::abs(spec.q)) {
    throw ConstraintViolation("series_H: requires t_0 = q");
  }
  const cplx p = spec.nome.p;
  ScaledC acc = ScaledC::from(cplx{1.0, 0.0});
  for (std::size_t k = 0; k < spec.w.size(); ++k) {
    ThetaEval num = theta_scaled(spec.t[k + 1] * u, p);
    if (num.rel < kThetaZeroSnap) return {0.0, 0.0};
    acc = acc * num.value;
    acc = acc / denominator_theta(spec.w[k] * u, p,
                                  "theta(w_" + std::to_string(k + 1) +
                                      " u; p)",
                                  -1);
  }
  return acc.to_complex();
}

RationalChiResult rational_chi_sum(const SeriesSpec& spec, long long a,
                                   long long b, cplx z) {
  spec.validate();
  if (b < 1) throw ConstraintViolation("rational_chi_sum: b must be >= 1");
  if (std::gcd(a < 0 ? -a : a, b) != 1) {
    throw ConstraintViolation("rational_chi_sum: gcd(a, b) must be 1");
  }
  if (spec.t.empty() ||
      std::abs(spec.t[0] - spec.q) > kBalanceTol * std::abs(spec.q)) {
    throw ConstraintViolation("rational_chi_sum: requires t_0 = q");
  }
  BalanceReport rep = check_balancing(spec);  // also enforces s = r + 1
  if (rep.balance_dev > kClassifyTol) {
    throw Unbalanced("rational_chi_sum: spec is not balanced (rel dev " +
                     std::to_string(rep.balance_dev) + ")");
  }

  // The base must close onto the p-lattice after b steps: q^b = p^L.
  RationalChiResult out;
  const cplx p = spec.nome.p;
  const cplx qb = ipow(spec.q, b);
  if (p == cplx{0.0, 0.0}) {
    if (std::abs(qb - cplx{1.0, 0.0}) > kBalanceTol) {
      throw ConstraintViolation(
          "rational_chi_sum: q^b must equal 1 when p = 0");
    }
    out.lattice_exponent = 0;
  } else {
    const double lq = std::log(std::abs(spec.q));
    const double lp = std::log(std::abs(p));
    const long long L = std::llround(double(b) * lq / lp);
    const cplx ratio = (ScaledC::from(qb) / scaled_ipow(p, L)).to_complex();
    if (std::abs(ratio - cplx{1.0, 0.0}) > kBalanceTol) {
      throw ConstraintViolation(
          "rational_chi_sum: q^b does not land on the p-lattice");
    }
    out.lattice_exponent = L;
  }

  // Numerator 1 + sum_{l=1}^{b-1} prod_{k<l} H(q^k) z^l and the full-period
  // product R.
  KahanSum numer;
  numer.add(cplx{1.0, 0.0});
  ScaledC hprod = ScaledC::from(cplx{1.0, 0.0});
  cplx qk{1.0, 0.0};
  cplx zl{1.0, 0.0};
  for (long long k = 0; k < b; ++k) {
    hprod = hprod * series_H(spec, qk);
    if (k + 1 < b) {
      zl *= z;
      numer.add(hprod.to_complex() * zl);
    }
    qk *= spec.q;
  }
  out.big_r = hprod.to_complex();
  out.r_c = std::exp(-hprod.log_abs() / double(b));

  const double log_tail = hprod.log_abs() +
                          double(b) * std::log(std::abs(z));  // log|R z^b|
  if (std::abs(std::expm1(log_tail)) <= 1e-10) {
    throw OnBoundary("rational_chi_sum: |R z^b| is on the unit circle");
  }
  if (log_tail > 0.0) {
    throw OutsideRadius(
        "rational_chi_sum: |R z^b| > 1 (outside the convergence disc; the "
        "closed form continues meromorphically but the series does not "
        "converge)");
  }
  const cplx rzb = (hprod * scaled_ipow(z, b)).to_complex();
  out.value = numer.value() / (cplx{1.0, 0.0} - rzb);
  return out;
}

PartialSumResult eval_qhyper(const std::vector<cplx>& t,
                             const std::vector<cplx>& w, cplx q, cplx z,
                             long long max_terms, double tail_tol) {
  if (max_terms < 1) {
    throw ConstraintViolation("eval_qhyper: max_terms must be >= 1");
  }
  PartialSumResult res;
  KahanSum sum;
  sum.add(cplx{1.0, 0.0});
  res.terms_used = 1;
  res.last_term_magnitude = 1.0;
  if (z == cplx{0.0, 0.0}) {
    res.value = cplx{1.0, 0.0};
    return res;
  }
  res.converged = false;

  ScaledC term = ScaledC::from(cplx{1.0, 0.0});
  const ScaledC zs = ScaledC::from(z);
  cplx qn{1.0, 0.0};
  TailWatch tail;

  auto linear = [](cplx x) { return cplx{1.0, 0.0} - x; };

  for (long long n = 0; n + 1 < max_terms; ++n) {
    ScaledC ratio = ScaledC::from(cplx{1.0, 0.0});
    bool numerator_zero = false;
    for (const cplx& tm : t) {
      cplx f = linear(tm * qn);
      if (std::abs(f) < kThetaZeroSnap * std::max(1.0, std::abs(tm * qn))) {
        numerator_zero = true;
        break;
      }
      ratio = ratio * f;
    }
    if (numerator_zero) {
      res.terminated = true;
      res.converged = true;
      res.term_log_ratios.push_back(-kInf);
      break;
    }
    cplx fq = linear(q * qn);  // 1 - q^{n+1}
    if (std::abs(fq) < kPoleProximity * std::max(1.0, std::abs(q * qn))) {
      throw PoleHit("eval_qhyper: (q; q)_n factor vanishes" + at_step(n));
    }
    ratio = ratio / ScaledC::from(fq);
    for (std::size_t k = 0; k < w.size(); ++k) {
      cplx f = linear(w[k] * qn);
      if (std::abs(f) < kPoleProximity * std::max(1.0, std::abs(w[k] * qn))) {
        throw PoleHit("eval_qhyper: denominator parameter w_" +
                      std::to_string(k + 1) + " hits a pole" + at_step(n));
      }
      ratio = ratio / ScaledC::from(f);
    }
    ScaledC next = term * ratio * zs;
    res.term_log_ratios.push_back(next.log_abs() - term.log_abs());
    term = next;
    if (term.log_abs() > kBlowupLog) break;
    sum.add(term.to_complex());
    ++res.terms_used;
    double mag = std::exp(term.log_abs());
    res.last_term_magnitude = mag;
    if (tail.settled(mag, tail_tol)) {
      res.converged = true;
      break;
    }
    qn *= q;
    if (qn == cplx{0.0, 0.0} || !std::isfinite(qn.real()) ||
        !std::isfinite(qn.imag())) {
      break;
    }
  }
  res.value = sum.value();
  return res;
}

std::vector<cplx> series_coefficients(const SeriesSpec& spec,
                                      std::size_t count) {
  spec.validate();
  std::vector<cplx> coeffs;
  coeffs.reserve(count);
  if (count == 0) return coeffs;
  coeffs.push_back(cplx{1.0, 0.0});
  ScaledC c = ScaledC::from(cplx{1.0, 0.0});
  cplx qn{1.0, 0.0};
  for (std::size_t n = 0; n + 1 < count; ++n) {
    RatioParts h = ratio_parts(spec, qn, static_cast<long long>(n));
    if (h.numerator_zero) {
      coeffs.resize(count, cplx{0.0, 0.0});
      return coeffs;
    }
    c = c * h.value;
    coeffs.push_back(c.to_complex());
    qn *= spec.q;
    if (qn == cplx{0.0, 0.0} || !std::isfinite(qn.real()) ||
        !std::isfinite(qn.imag())) {
      throw NotConverged("series_coefficients: q^n left double range");
    }
  }
  return coeffs;
}

cplx vwp_H(const VwpSpec& spec, cplx u) {
  spec.validate();
  require_nonzero(u, "vwp_H evaluated at u = 0");
  const cplx p = spec.nome.p;
  const cplx q = spec.q;
  std::vector<cplx> tt;
  tt.reserve(spec.t.size() + 1);
  tt.push_back(spec.t0);
  tt.insert(tt.end(), spec.t.begin(), spec.t.end());

  ThetaEval num0 = theta_scaled(spec.t0 * q * q * u * u, p);
  if (num0.rel < kThetaZeroSnap) return {0.0, 0.0};
  ScaledC acc = num0.value;
  acc = acc / denominator_theta(spec.t0 * u * u, p, "theta(t0 u^2; p)", -1);
  for (std::size_t j = 0; j < tt.size(); ++j) {
    ThetaEval num = theta_scaled(tt[j] * u, p);
    if (num.rel < kThetaZeroSnap) return {0.0, 0.0};
    acc = acc * num.value;
    acc = acc / denominator_theta(q * spec.t0 * u / tt[j], p,
                                  "theta(q t0 u / t_" + std::to_string(j) +
                                      "; p)",
                                  -1);
  }
  return (acc * (-q)).to_complex();
}

}  // namespace elliptheta
