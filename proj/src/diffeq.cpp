#include "elliptheta/diffeq.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

namespace elliptheta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute allowance on normalized residuals in the doubling-monotonicity
// test: cancellation noise of a window of unit-scale summands.
constexpr double kDoublingNoise = 1e-11;
// Tail pollution below this fraction of the summand scale never invalidates
// a report, even when the reported residual itself sits at the noise floor.
constexpr double kPollutionFloor = 1e-12;
// Operator weights whose a-priori log-magnitude bound falls below this are
// exact zeros for doubles; their sample is never requested.
constexpr double kWeightLnCutoff = -650.0;

long long floor_div(long long n, long long k) {
  long long d = n / k;
  return (n % k != 0 && (n < 0) != (k < 0)) ? d - 1 : d;
}

// Minimal value of sum_j binom(m_j, 2) over integer vectors m with
// m_1 + ... + m_k = n: the exact lattice-suppression exponent of the
// coefficient Phi_n (binom2 is convex, so the balanced split is optimal).
long long min_lattice_exponent(long long n, long long k) {
  long long a = floor_div(n, k);
  long long b = n - k * a;
  return b * binom2(a + 1) + (k - b) * binom2(a);
}

// True when |Phi_n(s; p)| is guaranteed below exp(kWeightLnCutoff); also
// detects the exact zeros of the p = 0 limit (elementary symmetric range).
bool weight_negligible(long long n, std::size_t args, cplx p, double ln_smax) {
  long long minexp = min_lattice_exponent(n, static_cast<long long>(args));
  if (minexp == 0) return false;
  double ap = std::abs(p);
  if (ap == 0.0) return true;
  double bound = double(minexp) * std::log(ap) +
                 std::abs(double(n)) * std::max(0.0, ln_smax) + 30.0;
  return bound < kWeightLnCutoff;
}

cplx phi_weight(const std::vector<cplx>& args, cplx p, long long n,
                double ln_smax) {
  if (args.empty()) return n == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  if (weight_negligible(n, args.size(), p, ln_smax)) return {0.0, 0.0};
  return phi_n_auto(args, p, n);
}

double ln_max_modulus(const std::vector<cplx>& args) {
  double m = -kInf;
  for (cplx a : args) m = std::max(m, std::log(std::abs(a)));
  return m;
}

cplx poly_eval(const std::vector<cplx>& c, cplx u) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
  return acc;
}

// Truncated coefficient table of the series plus the log-magnitude of its
// final coefficient (the quantity driving the pollution estimates).
struct OrbitPolynomial {
  std::vector<cplx> coeff;
  double ln_tail = -kInf;
};

OrbitPolynomial prepare_orbit(const SeriesSpec& spec, long long count) {
  OrbitPolynomial o;
  o.coeff = series_coefficients(spec, static_cast<std::size_t>(count));
  for (const cplx& c : o.coeff) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw OutsideRadius(
          "bilateral residual: series coefficients overflow double range");
    }
  }
  double a = std::abs(o.coeff.back());
  if (a > 0.0) o.ln_tail = std::log(a);
  return o;
}

// Running maximum of log |weight * tail-term| over the sampled points.
struct PollutionTracker {
  double worst_ln = -kInf;
  long long worst_shift = 0;

  void observe(const OrbitPolynomial& orbit, long long degree, cplx weight,
               long long shift, cplx u) {
    if (weight == cplx{0.0, 0.0} || orbit.ln_tail == -kInf) return;
    double lp = orbit.ln_tail + double(degree - 1) * std::log(std::abs(u)) +
                std::log(std::abs(weight));
    if (lp > worst_ln) {
      worst_ln = lp;
      worst_shift = shift;
    }
  }
};

// Windowed assembly shared by every bilateral operator: full-window residual
// and scale, plus the doubling-monotonicity convergence flag.
ResidualReport assemble_windowed(const std::vector<cplx>& summand,
                                 long long w_full) {
  auto window = [&](long long w) {
    KahanSum s;
    double scale = 0.0;
    for (long long i = -w; i <= w; ++i) {
      cplx v = summand[static_cast<std::size_t>(i + w_full)];
      s.add(v);
      scale = std::max(scale, std::abs(v));
    }
    return std::pair<cplx, double>(s.value(), scale);
  };
  auto norm = [](const std::pair<cplx, double>& pr) {
    return pr.second > 0.0 ? std::abs(pr.first) / pr.second : 0.0;
  };

  ResidualReport rep;
  auto full = window(w_full);
  rep.residual = full.first;
  rep.residual_scale = full.second;
  rep.n_range_used = w_full;
  if (w_full >= 4) {
    double n1 = norm(full);
    double n2 = norm(window(w_full / 2));
    double n4 = norm(window(w_full / 4));
    rep.converged =
        n1 <= 1.1 * n2 + kDoublingNoise && n2 <= 1.1 * n4 + kDoublingNoise;
  }
  return rep;
}

// Throws OutsideRadius when the recorded pollution could move the reported
// residual: the truncated polynomial had not settled at a sampled point whose
// operator weight matters.
void police_pollution(const ResidualReport& rep, const PollutionTracker& poll) {
  if (poll.worst_ln == -kInf) return;
  double allowed = std::max(0.5 * std::abs(rep.residual),
                            kPollutionFloor * rep.residual_scale);
  if (allowed > 0.0 && poll.worst_ln <= std::log(allowed)) return;
  throw OutsideRadius(
      "bilateral residual: sampled point q^" +
      std::to_string(poll.worst_shift) +
      " z lies outside the reliably summed disc (series tail undecayed)");
}

ResidualReport final_eq_impl(const SeriesSpec& spec, cplx z,
                             const OperatorTruncation& trunc,
                             const std::function<cplx(long long)>* f_shift) {
  spec.validate();
  trunc.validate();
  const cplx q = spec.q;
  const cplx p = spec.nome.p;
  const long long n_range = trunc.n_range;

  std::vector<cplx> wargs;
  wargs.reserve(spec.w.size() + 1);
  wargs.emplace_back(1.0, 0.0);
  for (cplx w : spec.w) wargs.push_back(w / q);
  const std::vector<cplx>& targs = spec.t;
  const double ln_wmax = ln_max_modulus(wargs);
  const double ln_tmax = targs.empty() ? -kInf : ln_max_modulus(targs);

  // (p;p)_inf^{s-1-r} balances the operator normalizations when the
  // parameter counts differ; 1 in the usual s = r + 1 case.
  const long long excess = static_cast<long long>(spec.t.size()) - 1 -
                           static_cast<long long>(spec.w.size());
  const cplx ppfac = ipow(qpochhammer_inf(p, p), excess);

  std::vector<cplx> weight(static_cast<std::size_t>(2 * n_range + 1));
  for (long long n = -n_range; n <= n_range; ++n) {
    cplx a = ppfac * phi_weight(wargs, p, n, ln_wmax);
    cplx b = phi_weight(targs, p, n, ln_tmax);
    weight[static_cast<std::size_t>(n + n_range)] = a - z * b;
  }

  std::vector<cplx> summand(weight.size(), cplx{0.0, 0.0});
  if (f_shift != nullptr) {
    for (long long n = -n_range; n <= n_range; ++n) {
      std::size_t i = static_cast<std::size_t>(n + n_range);
      if (weight[i] != cplx{0.0, 0.0}) summand[i] = weight[i] * (*f_shift)(n);
    }
    return assemble_windowed(summand, n_range);
  }

  OrbitPolynomial orbit = prepare_orbit(spec, trunc.f_truncation);
  PollutionTracker poll;
  for (long long n = -n_range; n <= n_range; ++n) {
    std::size_t i = static_cast<std::size_t>(n + n_range);
    if (weight[i] == cplx{0.0, 0.0}) continue;
    cplx u = ipow(q, n) * z;
    summand[i] = weight[i] * poly_eval(orbit.coeff, u);
    poll.observe(orbit, trunc.f_truncation, weight[i], n, u);
  }
  ResidualReport rep = assemble_windowed(summand, n_range);
  police_pollution(rep, poll);
  return rep;
}

// The four parameter-only theta constants of the compact two-numerator form
// (p2 = p^2 is the doubled nome used throughout that form).
struct CompactThetas {
  ScaledC even_c, odd_c, even_ab, odd_ab;
};

CompactThetas compact_thetas(cplx a, cplx b, cplx c, cplx q, cplx p) {
  const cplx p2 = p * p;
  CompactThetas t;
  t.even_c = theta_scaled(-p * q / c, p2).value;
  t.odd_c = theta_scaled(-q / c, p2).value;
  t.even_ab = theta_scaled(-p * a / b, p2).value;
  t.odd_ab = theta_scaled(-a / b, p2).value;
  return t;
}

void require_compact_form(cplx a, cplx b, cplx c, cplx q, cplx p) {
  if (a == cplx{0.0, 0.0} || b == cplx{0.0, 0.0} || c == cplx{0.0, 0.0} ||
      q == cplx{0.0, 0.0}) {
    throw ZeroArgument("compact form: parameters must be nonzero");
  }
  if (p == cplx{0.0, 0.0}) {
    throw ConstraintViolation(
        "compact form: p = 0 degenerates the doubled-nome coefficients; "
        "use residual_final_eq, whose lattice route handles p = 0 exactly");
  }
  if (!(std::abs(p) < 1.0)) {
    throw DivergedModulus("compact form: |p| must be < 1");
  }
}

SeriesSpec compact_spec(cplx a, cplx b, cplx c, cplx q, cplx p) {
  SeriesSpec spec;
  spec.t = {a, b};
  spec.w = {c};
  spec.q = q;
  spec.nome = Nome::from_p(p);
  return spec;
}

// Coefficient multiplying f(q^n z) in the compact bilateral form:
//   (-1)^n p^{binom(n,2)} [ theta(-(q/c) p^{n+1}; p^2)
//                           - z a^n theta(-(a/b) p^{n+1}; p^2) ].
cplx compact_weight(cplx a, cplx b, cplx c, cplx q, cplx p, cplx z,
                    long long n) {
  const cplx p2 = p * p;
  const cplx pshift = ipow(p, n + 1);
  const ScaledC lead = scaled_ipow(p, binom2(n));
  const ScaledC tc = lead * theta_scaled(-(q / c) * pshift, p2).value;
  const ScaledC tab =
      lead * theta_scaled(-(a / b) * pshift, p2).value * scaled_ipow(a, n);
  const double sign = (n % 2 != 0) ? -1.0 : 1.0;
  return sign * (tc.to_complex() - z * tab.to_complex());
}

// The two coefficient lines of the split form at split index k: wE multiplies
// f(q^{2k} z) and wO multiplies f(q^{2k+1} z) (its sign already applied).
std::pair<cplx, cplx> split_weights(const CompactThetas& t, cplx a, cplx b,
                                    cplx c, cplx q, cplx p, cplx z,
                                    long long k) {
  const ScaledC even_lead = scaled_ipow(p, k * (k - 1));
  const ScaledC odd_lead = scaled_ipow(p, k * k);
  const ScaledC cq_k = scaled_ipow(c / q, k);
  const ScaledC ab_k = scaled_ipow(a * b, k);
  cplx we = (even_lead * t.even_c * cq_k).to_complex() -
            z * (even_lead * t.even_ab * ab_k).to_complex();
  cplx wo = (odd_lead * t.odd_c * cq_k * (c / q)).to_complex() -
            z * b * (odd_lead * t.odd_ab * ab_k).to_complex();
  return {we, -wo};
}

// x - y evaluated at the common scale exp(max log): `sum` is the scaled
// difference and `rel` its magnitude relative to the larger operand, the
// quantity that decides degeneracy.
struct ScaledDiff {
  ScaledC sum;
  double rel = 0.0;
};

ScaledDiff scaled_sub(const ScaledC& x, const ScaledC& y) {
  if (x.is_zero() && y.is_zero()) return {ScaledC::zero(), 0.0};
  double m = std::max(x.log_abs(), y.log_abs());
  cplx xv = x.is_zero() ? cplx{0.0, 0.0} : x.m * std::exp(x.e - m);
  cplx yv = y.is_zero() ? cplx{0.0, 0.0} : y.m * std::exp(y.e - m);
  cplx d = xv - yv;
  return {ScaledC{d, m}.normalized(), std::abs(d)};
}

// A(n) and B(n) of the first-order coefficient recurrence (common
// (p^2;p^2)_inf factor dropped: only the ratio matters).
ScaledDiff recurrence_a(const CompactThetas& t, cplx c, cplx q, cplx p,
                        long long n) {
  const cplx p2 = p * p;
  const cplx orbit = ipow(q, 2 * n - 1);
  ScaledC x = t.even_c * theta_scaled(-c * orbit, p2).value;
  ScaledC y = t.odd_c * theta_scaled(-p * c * orbit, p2).value *
              ScaledC::from((c / q) * ipow(q, n));
  return scaled_sub(x, y);
}

ScaledDiff recurrence_b(const CompactThetas& t, cplx a, cplx b, cplx q, cplx p,
                        long long n) {
  const cplx p2 = p * p;
  const cplx orbit = ipow(q, 2 * n - 2);
  ScaledC x = t.even_ab * theta_scaled(-a * b * orbit, p2).value;
  ScaledC y = t.odd_ab * theta_scaled(-p * a * b * orbit, p2).value *
              ScaledC::from(b * ipow(q, n - 1));
  return scaled_sub(x, y);
}

}  // namespace

void OperatorTruncation::validate() const {
  if (n_range < 1) {
    throw ConstraintViolation("OperatorTruncation: n_range must be >= 1");
  }
  if (f_truncation < n_range + 10) {
    throw ConstraintViolation(
        "OperatorTruncation: f_truncation must be >= n_range + 10");
  }
}

double ResidualReport::normalized() const {
  return residual_scale > 0.0 ? std::abs(residual) / residual_scale : 0.0;
}

ResidualReport residual_final_eq(const SeriesSpec& spec, cplx z,
                                 const OperatorTruncation& trunc) {
  return final_eq_impl(spec, z, trunc, nullptr);
}

ResidualReport residual_final_eq_with(
    const SeriesSpec& spec, cplx z, const OperatorTruncation& trunc,
    const std::function<cplx(long long)>& f_shift) {
  return final_eq_impl(spec, z, trunc, &f_shift);
}

ResidualReport residual_2E1(cplx a, cplx b, cplx c, cplx q, cplx p, cplx z,
                            const OperatorTruncation& trunc) {
  require_compact_form(a, b, c, q, p);
  trunc.validate();
  SeriesSpec spec = compact_spec(a, b, c, q, p);
  spec.validate();

  const long long n_range = trunc.n_range;
  OrbitPolynomial orbit = prepare_orbit(spec, trunc.f_truncation);
  PollutionTracker poll;
  std::vector<cplx> summand(static_cast<std::size_t>(2 * n_range + 1),
                            cplx{0.0, 0.0});
  for (long long n = -n_range; n <= n_range; ++n) {
    cplx w = compact_weight(a, b, c, q, p, z, n);
    if (w == cplx{0.0, 0.0}) continue;
    cplx u = ipow(q, n) * z;
    summand[static_cast<std::size_t>(n + n_range)] =
        w * poly_eval(orbit.coeff, u);
    poll.observe(orbit, trunc.f_truncation, w, n, u);
  }
  ResidualReport rep = assemble_windowed(summand, n_range);
  police_pollution(rep, poll);
  return rep;
}

ResidualReport residual_2E1_split(cplx a, cplx b, cplx c, cplx q, cplx p,
                                  cplx z, const OperatorTruncation& trunc) {
  require_compact_form(a, b, c, q, p);
  trunc.validate();
  if (trunc.f_truncation < 2 * trunc.n_range + 11) {
    throw ConstraintViolation(
        "residual_2E1_split: f_truncation must be >= 2 n_range + 11 "
        "(sampled shifts reach q^{2 n_range + 1})");
  }
  SeriesSpec spec = compact_spec(a, b, c, q, p);
  spec.validate();

  const long long k_range = trunc.n_range;
  const CompactThetas thetas = compact_thetas(a, b, c, q, p);
  OrbitPolynomial orbit = prepare_orbit(spec, trunc.f_truncation);
  PollutionTracker poll;
  std::vector<cplx> summand(static_cast<std::size_t>(2 * k_range + 1),
                            cplx{0.0, 0.0});
  for (long long k = -k_range; k <= k_range; ++k) {
    auto [we, wo] = split_weights(thetas, a, b, c, q, p, z, k);
    cplx acc{0.0, 0.0};
    if (we != cplx{0.0, 0.0}) {
      cplx u = ipow(q, 2 * k) * z;
      acc += we * poly_eval(orbit.coeff, u);
      poll.observe(orbit, trunc.f_truncation, we, 2 * k, u);
    }
    if (wo != cplx{0.0, 0.0}) {
      cplx u = ipow(q, 2 * k + 1) * z;
      acc += wo * poly_eval(orbit.coeff, u);
      poll.observe(orbit, trunc.f_truncation, wo, 2 * k + 1, u);
    }
    summand[static_cast<std::size_t>(k + k_range)] = acc;
  }
  ResidualReport rep = assemble_windowed(summand, k_range);
  police_pollution(rep, poll);
  return rep;
}

cplx split_summand_2E1(cplx a, cplx b, cplx c, cplx q, cplx p, cplx z,
                       const OperatorTruncation& trunc, long long k) {
  require_compact_form(a, b, c, q, p);
  trunc.validate();
  const long long kk = k < 0 ? -k : k;
  if (trunc.f_truncation < 2 * kk + 11) {
    throw ConstraintViolation(
        "split_summand_2E1: f_truncation must be >= 2 |k| + 11");
  }
  SeriesSpec spec = compact_spec(a, b, c, q, p);
  spec.validate();

  const CompactThetas thetas = compact_thetas(a, b, c, q, p);
  OrbitPolynomial orbit = prepare_orbit(spec, trunc.f_truncation);
  auto [we, wo] = split_weights(thetas, a, b, c, q, p, z, k);
  cplx acc{0.0, 0.0};
  if (we != cplx{0.0, 0.0}) {
    acc += we * poly_eval(orbit.coeff, ipow(q, 2 * k) * z);
  }
  if (wo != cplx{0.0, 0.0}) {
    acc += wo * poly_eval(orbit.coeff, ipow(q, 2 * k + 1) * z);
  }
  return acc;
}

cplx bilateral_weight_2E1(cplx a, cplx b, cplx c, cplx q, cplx p, cplx z,
                          long long n) {
  require_compact_form(a, b, c, q, p);
  return compact_weight(a, b, c, q, p, z, n);
}

std::vector<cplx> laurent_recurrence_2E1(cplx a, cplx b, cplx c, cplx q,
                                         cplx p, int count) {
  require_compact_form(a, b, c, q, p);
  if (count < 1) {
    throw ConstraintViolation("laurent_recurrence_2E1: count must be >= 1");
  }
  const CompactThetas thetas = compact_thetas(a, b, c, q, p);
  std::vector<cplx> out(static_cast<std::size_t>(count));
  out[0] = cplx{1.0, 0.0};
  ScaledC acc = ScaledC::from(cplx{1.0, 0.0});
  for (int n = 1; n < count; ++n) {
    ScaledDiff an = recurrence_a(thetas, c, q, p, n);
    if (an.rel < 1e-10) {
      throw DegenerateParameters(
          "laurent_recurrence_2E1: recurrence denominator vanishes at n = " +
          std::to_string(n));
    }
    ScaledDiff bn = recurrence_b(thetas, a, b, q, p, n);
    acc = acc * (bn.sum / an.sum);
    out[static_cast<std::size_t>(n)] = acc.to_complex();
  }
  return out;
}

cplx laurent_backward_ratio_2E1(cplx a, cplx b, cplx c, cplx q, cplx p) {
  require_compact_form(a, b, c, q, p);
  const CompactThetas thetas = compact_thetas(a, b, c, q, p);
  ScaledDiff a0 = recurrence_a(thetas, c, q, p, 0);
  ScaledDiff b0 = recurrence_b(thetas, a, b, q, p, 0);
  if (b0.rel < 1e-10) {
    throw DegenerateParameters(
        "laurent_backward_ratio_2E1: B(0) vanishes for these parameters");
  }
  if (a0.sum.is_zero()) return {0.0, 0.0};
  return (a0.sum / b0.sum).to_complex();
}

ResidualReport theta_qdelta_apply(
    cplx a, cplx q, cplx p, const OperatorTruncation& trunc,
    const std::function<cplx(long long)>& f_shift) {
  trunc.validate();
  if (a == cplx{0.0, 0.0} || q == cplx{0.0, 0.0}) {
    throw ZeroArgument("theta_qdelta_apply: a and q must be nonzero");
  }
  if (!(std::abs(p) < 1.0)) {
    throw DivergedModulus("theta_qdelta_apply: |p| must be < 1");
  }
  const long long n_range = trunc.n_range;
  const cplx ppinv = cplx{1.0, 0.0} / qpochhammer_inf(p, p);
  std::vector<cplx> summand(static_cast<std::size_t>(2 * n_range + 1));
  for (long long n = -n_range; n <= n_range; ++n) {
    cplx w = (scaled_ipow(p, binom2(n)) * scaled_ipow(-a, n)).to_complex();
    summand[static_cast<std::size_t>(n + n_range)] =
        w == cplx{0.0, 0.0} ? cplx{0.0, 0.0} : ppinv * w * f_shift(n);
  }
  return assemble_windowed(summand, n_range);
}

ResidualReport kernel_check(cplx a, cplx q, cplx p, long long k, cplx z,
                            const OperatorTruncation& trunc) {
  if (z == cplx{0.0, 0.0}) throw ZeroArgument("kernel_check: z = 0");
  if (z.imag() == 0.0 && z.real() < 0.0) {
    throw BranchCut("kernel_check: z on the negative real axis");
  }
  if (a == cplx{0.0, 0.0} || q == cplx{0.0, 0.0}) {
    throw ZeroArgument("kernel_check: a and q must be nonzero");
  }
  if (std::abs(std::abs(q) - 1.0) <= 1e-12) {
    throw ConstraintViolation(
        "kernel_check: |q| = 1 leaves the power exponent undefined");
  }
  if (p == cplx{0.0, 0.0}) {
    throw ConstraintViolation("kernel_check: p = 0 has no lattice of kernels");
  }
  if (!(std::abs(p) < 1.0)) {
    throw DivergedModulus("kernel_check: |p| must be < 1");
  }

  // Kernel candidate z^L continued branch-coherently along the orbit: the
  // same principal logs of q and z enter every sample, so the summands
  // collapse to multiples of z^L exactly and the lattice zero of theta does
  // the rest.
  const cplx lq = std::log(q);
  const cplx lz = std::log(z);
  const cplx ell = -std::log(a * ipow(p, k)) / lq;
  auto f = [&](long long n) { return std::exp(ell * (double(n) * lq + lz)); };
  return theta_qdelta_apply(a, q, p, trunc, f);
}

}  // namespace elliptheta
