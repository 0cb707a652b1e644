#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "elliptheta/bounds.hpp"
#include "elliptheta/errors.hpp"
#include "elliptheta/radius.hpp"
#include "elliptheta/series.hpp"
#include "elliptheta/theta.hpp"
#include "support.hpp"

using namespace elliptheta;
using testsupport::Draw;
using testsupport::rel_err;

namespace {

// Independent route to log |theta(q^n; p)|: fold q^n into the fundamental
// annulus with the shift law theta(p^N y; p) = (-y)^{-N} p^{-N(N-1)/2}
// theta(y; p) (an identity for every integer N, so the floating-point floor
// cannot invalidate it) and evaluate the product on the reduced point.  The
// naive argument q^n leaves double range near n ~ 1075, this never does.
double log_theta_power_direct(cplx q, cplx p, long long n) {
  double alpha = std::log(std::abs(q)) / std::log(std::abs(p));
  double lp = std::log(std::abs(p));
  double x = double(n) * alpha;
  double nn = std::floor(x);
  double f = x - nn;
  cplx y = std::polar(std::exp(f * lp),
                      double(n) * std::arg(q) - nn * std::arg(p));
  return (-nn * f - binom2_real(nn)) * lp + log_abs_theta(y, p);
}

double log_ppinf_sq(double ap) {
  return 2.0 * std::log(std::abs(qpochhammer_inf(cplx(ap), cplx(ap))));
}

// The rational-alpha test base: |q| = |p|^{1/2} exactly, with a phase so
// that sigma = arg(q^2 / p) / 2 pi = 1/pi is irrational.
const cplx kQRat = std::polar(0.5, 1.0);
const cplx kPRat = cplx(0.25, 0.0);

}  // namespace

TEST_CASE("alpha decomposition: exact split and declaration checks") {
  // Irrational declaration: floor/fraction reassemble n * alpha exactly.
  cplx q = std::polar(0.6, 0.2);
  cplx p = cplx(0.3, 0.0);
  double alpha = std::log(0.6) / std::log(0.3);
  for (long long n : {1LL, 2LL, 17LL, 331LL, 4096LL, 10000LL}) {
    AlphaDecomposition d = alpha_decomposition(q, p, n, Rationality::irrational());
    CHECK(d.alpha == doctest::Approx(alpha).epsilon(1e-15));
    CHECK(d.frac >= 0.0);
    CHECK(d.frac < 1.0);
    CHECK(double(d.N_n) + d.frac == doctest::Approx(double(n) * alpha).epsilon(1e-12));
    CHECK_FALSE(d.rationality.is_rational);
  }

  // Rational declaration: the split is exact integer arithmetic on n a / b.
  Rationality half = Rationality::rational(1, 2);
  for (long long n = 1; n <= 2000; ++n) {
    AlphaDecomposition d = alpha_decomposition(kQRat, kPRat, n, half);
    CHECK(d.N_n == n / 2);
    CHECK(d.frac == (n % 2 == 0 ? 0.0 : 0.5));
    // The double route agrees to rounding error.
    CHECK(double(d.N_n) + d.frac == doctest::Approx(double(n) * 0.5).epsilon(5e-13));
  }

  // A rational declaration that contradicts the moduli is rejected.
  CHECK_THROWS_AS(alpha_decomposition(q, p, 5, half), ConstraintViolation);

  // Malformed rationals never construct.
  CHECK_THROWS_AS(Rationality::rational(2, 4), ConstraintViolation);
  CHECK_THROWS_AS(Rationality::rational(0, 1), ConstraintViolation);
  CHECK_THROWS_AS(Rationality::rational(1, 2'000'000'000), ConstraintViolation);
}

TEST_CASE("theta power lower bound: sound against direct evaluation") {
  // The bound must sit below the directly evaluated log |theta(q^n; p)| for
  // every n — the 1e-9 slack only absorbs floating-point noise in the two
  // routes, not any analytic violation.
  auto violations = [](cplx q, cplx p, long long n_max) {
    long long bad = 0;
    double worst = -1e300;
    for (long long n = 1; n <= n_max; ++n) {
      double lb = theta_qn_lower_bound(q, p, n, Rationality::irrational());
      double direct = log_theta_power_direct(q, p, n);
      double overshoot = lb - direct;
      worst = std::max(worst, overshoot);
      if (overshoot > 1e-9) ++bad;
    }
    CAPTURE(worst);
    return bad;
  };

  CHECK(violations(std::polar(0.6, 0.2), cplx(0.3, 0.0), 10000) == 0);

  Draw draw(7301);
  for (int rep = 0; rep < 20; ++rep) {
    cplx q = std::polar(draw.real_in(0.15, 0.85), draw.real_in(0.05, 6.2));
    cplx p = draw.nome(0.1, 0.6);
    CAPTURE(q);
    CAPTURE(p);
    CHECK(violations(q, p, 10000) == 0);
  }

  // Composition check on the oracle itself: for n small enough that q^n
  // stays comfortably inside double range, the folded route agrees with the
  // unfolded evaluation.
  cplx q = std::polar(0.6, 0.2);
  cplx p = cplx(0.3, 0.0);
  for (long long n = 1; n <= 60; ++n) {
    double folded = log_theta_power_direct(q, p, n);
    double plain = log_abs_theta(ipow(q, n), p);
    CHECK(folded == doctest::Approx(plain).epsilon(1e-8));
  }
}

TEST_CASE("theta power lower bound: chain holds link by link") {
  cplx q = std::polar(0.6, 0.2);
  cplx p = cplx(0.3, 0.0);
  double lp = std::log(std::abs(p));
  double lq = std::log(std::abs(q));
  double lpp2 = log_ppinf_sq(std::abs(p));

  std::vector<long long> samples;
  for (long long n = 1; n <= 40; ++n) samples.push_back(n);
  samples.push_back(997);
  samples.push_back(5000);

  for (long long n : samples) {
    CAPTURE(n);
    AlphaDecomposition d =
        alpha_decomposition(q, p, n, Rationality::irrational());
    double nn = double(d.N_n);
    double f = d.frac;
    cplx y = std::polar(std::exp(f * lp),
                        double(n) * std::arg(q) - nn * std::arg(p));

    // Annulus estimate on the reduced point: |theta(y)| >= (1 - |y|)
    // (1 - |p|/|y|) (|p|; |p|)_inf^2, with |y| = |p|^f.
    double annulus_est = std::log1p(-std::pow(std::abs(p), f)) +
                         std::log1p(-std::pow(std::abs(p), 1.0 - f)) + lpp2;
    CHECK(log_abs_theta(y, p) >= annulus_est - 1e-9);

    // Exact prefactor rewrite: |q|^{-n N} |p|^{binom(N+1, 2)} =
    // |p|^{-N f - binom(N, 2)} — an identity, checked in relative terms
    // because both sides grow like n^2.
    double lhs = -double(n) * nn * lq + binom2_real(nn + 1.0) * lp;
    double rhs = (-nn * f - binom2_real(nn)) * lp;
    CHECK(rel_err(lhs, rhs) < 1e-12);

    // Dropping |p|^{-N f} >= 1 only lowers the bound.
    CHECK(-nn * f * lp >= -1e-15);
    double assembled = -binom2_real(nn) * lp + annulus_est;
    double lb = theta_qn_lower_bound(q, p, n, Rationality::irrational());
    CHECK(lb == doctest::Approx(assembled).epsilon(1e-12));
    // Links composed: the assembled bound sits below the exact value.
    CHECK(lb <= rhs + log_abs_theta(y, p) + 1e-9);
  }
}

TEST_CASE("theta power lower bound: declared-rational regimes") {
  Rationality half = Rationality::rational(1, 2);
  double ap = std::abs(kPRat);
  double lp = std::log(ap);
  double lpp2 = log_ppinf_sq(ap);

  for (long long n : {1LL, 3LL, 7LL, 25LL, 99LL, 1001LL}) {
    CAPTURE(n);
    // n coprime to b = 2 puts the fractional part at exactly 1/2, so the
    // two middle factors coincide.
    double lb = theta_qn_lower_bound(kQRat, kPRat, n, half);
    double expected = -binom2_real(double(n / 2)) * lp +
                      2.0 * std::log1p(-std::sqrt(ap)) + lpp2;
    CHECK(lb == doctest::Approx(expected).epsilon(1e-12));

    // Display form: after dropping the nonnegative prefactor exponent the
    // bound is at least (1 - |p|^{1/b})^2 (|p|; |p|)_inf^2.
    CHECK(lb >= 2.0 * std::log1p(-std::sqrt(ap)) + lpp2 - 1e-12);

    // And it is still sound against direct evaluation.
    CHECK(lb <= log_theta_power_direct(kQRat, kPRat, n) + 1e-9);
  }

  // b | n collapses the estimate entirely: the reduced point has modulus
  // exactly 1 and the sigma route (inside the z-domain scans) must be used
  // instead.  Direct evaluation stays finite, so -infinity is still sound.
  double collapsed = theta_qn_lower_bound(kQRat, kPRat, 6, half);
  CHECK(std::isinf(collapsed));
  CHECK(collapsed < 0.0);
  CHECK(std::isfinite(log_theta_power_direct(kQRat, kPRat, 6)));

  // A numerically-on-lattice base declared irrational is a contradiction.
  cplx q_lat = cplx(0.5 * (1.0 - 1e-14), 0.0);
  CHECK_THROWS_AS(
      theta_qn_lower_bound(q_lat, kPRat, 2, Rationality::irrational()),
      LatticeDegenerate);
}

TEST_CASE("annulus supremum: grid anchors and sampled margin") {
  cplx p = cplx(0.25, 0.0);
  double s = theta_sup_annulus(p);

  // u = -1 lies exactly on the sampling grid, so the inflated supremum
  // dominates 1.5x the value there.
  CHECK(s >= kThetaSupInflation * std::abs(theta(cplx(-1.0, 0.0), p)) - 1e-12);

  // Off-grid samples stay below the inflated supremum with room to spare.
  Draw draw(7303);
  for (int rep = 0; rep < 200; ++rep) {
    cplx u = draw.annulus(0.25, 1.0);
    CHECK(s >= std::abs(theta(u, p)));
  }

  // Deterministic: the grid is fixed.
  CHECK(s == theta_sup_annulus(p));

  CHECK_THROWS_AS(theta_sup_annulus(cplx(0.0, 0.0)), DegenerateParameters);
  CHECK_THROWS_AS(theta_sup_annulus(cplx(1.1, 0.0)), DivergedModulus);
}

TEST_CASE("zero-parameter z-domain: rational base") {
  Rationality half = Rationality::rational(1, 2);
  ZBoundReport rep = z_bound_0E0(kQRat, kPRat, half, 50);

  // sigma = arg(q^2 / p) / 2 pi = 1/pi; the scan minimum sits at k = 1
  // because the |p|^{-binom(k a, 2)} weights explode afterwards.
  CHECK(rep.sigma == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(rep.proxy_argmin == 1);
  CHECK(rep.proxy_c == doctest::Approx(1.0 / kPi).epsilon(1e-13));

  // Assembly: min of the two routes times the squared infinite product.
  double plain = 1.0 - std::sqrt(std::abs(kPRat));
  double expected = std::min(rep.proxy_c, plain * plain) *
                    std::exp(log_ppinf_sq(std::abs(kPRat)));
  CHECK(rep.z_bound == doctest::Approx(expected).epsilon(1e-13));
  CHECK(rep.theta_sup == 1.0);
  CHECK(rep.scan_depth == 50);
  CHECK(rep.rationality.is_rational);

  // Utility experiment: at 90% of the reported domain the term logs fall
  // strictly, already from the start and certainly beyond n = 50.
  double lz = std::log(0.9 * rep.z_bound);
  double log_term = 0.0;
  int non_decreasing = 0;
  for (long long n = 1; n <= 300; ++n) {
    double step = lz - log_theta_power_direct(kQRat, kPRat, n);
    if (step >= 0.0) ++non_decreasing;
    log_term += step;
  }
  CHECK(non_decreasing == 0);
  CHECK(log_term < -100.0);

  // The generic evaluator agrees: its tail test fires well before the term
  // cap at this argument.  (At 10x the bound divergence may occur — the
  // domain is sufficient, not tight — so nothing is asserted there.)
  SeriesSpec zero_param;
  zero_param.q = kQRat;
  zero_param.nome = Nome::from_p(kPRat);
  PartialSumResult direct =
      eval_sEr(zero_param, cplx(0.9 * rep.z_bound, 0.0));
  CHECK(direct.converged);
  CHECK_FALSE(direct.terminated);

  // A real positive q with |q|^2 = |p| has sigma = 0: the series divides by
  // theta(p; p) = 0 and no domain exists.
  CHECK_THROWS_AS(z_bound_0E0(cplx(0.5, 0.0), kPRat, half, 50),
                  UndefinedSeries);

  // The same collision reached through a declared-irrational scan.
  CHECK_THROWS_AS(z_bound_0E0(cplx(0.5 * (1.0 - 1e-14), 0.0), kPRat,
                              Rationality::irrational(), 10),
                  UndefinedSeries);
}

TEST_CASE("zero-parameter z-domain: irrational base and small-p scan") {
  cplx q = cplx(0.5, 0.0);
  cplx p = cplx(0.3, 0.0);
  double alpha = std::log(0.5) / std::log(0.3);
  ZBoundReport rep = z_bound_0E0(q, p, Rationality::irrational(), 300);

  // Hand-located minimum of |p|^{-binom2(n alpha - 1)} {n alpha}{-n alpha}:
  // n = 2 wins (0.119 against 0.352 at n = 1 and growth beyond).
  CHECK(rep.proxy_argmin == 2);
  double f2 = 2.0 * alpha - 1.0;  // N_2 = 1 for this base
  double c2 = std::pow(0.3, -binom2_real(2.0 * alpha - 1.0)) * f2 * (1.0 - f2);
  CHECK(rep.proxy_c == doctest::Approx(c2).epsilon(1e-12));

  double lp = std::log(0.3);
  double expected = rep.proxy_c * 0.3 * lp * lp * std::exp(log_ppinf_sq(0.3));
  CHECK(rep.z_bound == doctest::Approx(expected).epsilon(1e-13));
  CHECK(rep.z_bound > 0.0);

  // Decay experiment at 90% of the domain, run only as deep as the scan
  // that produced the bound.
  double lz = std::log(0.9 * rep.z_bound);
  int non_decreasing = 0;
  for (long long n = 1; n <= 300; ++n)
    if (lz - log_theta_power_direct(q, p, n) >= 0.0) ++non_decreasing;
  CHECK(non_decreasing == 0);

  SeriesSpec zero_param;
  zero_param.q = q;
  zero_param.nome = Nome::from_p(p);
  CHECK(eval_sEr(zero_param, cplx(0.9 * rep.z_bound, 0.0)).converged);

  // Small-p scan: the domain stays inside the unit disc, consistent with
  // the p -> 0 limit 1/(z; q)_inf whose nearest pole sits at |z| = 1/|q|,
  // and the evaluator converges inside it every time.
  for (double small_p : {1e-2, 1e-3, 1e-4, 1e-5}) {
    ZBoundReport r =
        z_bound_0E0(std::polar(0.5, 0.7), cplx(small_p, 0.0),
                    Rationality::irrational(), 300);
    CAPTURE(small_p);
    CHECK(r.z_bound > 0.0);
    CHECK(r.z_bound <= 1.0);
    SeriesSpec scan_spec;
    scan_spec.q = std::polar(0.5, 0.7);
    scan_spec.nome = Nome::from_p(cplx(small_p, 0.0));
    CHECK(eval_sEr(scan_spec, cplx(0.9 * r.z_bound, 0.0)).converged);
  }
}

TEST_CASE("one-parameter z-domain: doubled numerator parameter") {
  Rationality half = Rationality::rational(1, 2);
  cplx t0 = 2.0 * kQRat;
  ZBoundReport rep = z_bound_1E0(t0, kQRat, kPRat, half, 60);

  // |q / t0| = 1/2 makes the weights 2^{k a}; the minimum lands on k = 3
  // where 3 sigma = 3/pi comes within 0.045 of an integer.
  CHECK(rep.proxy_argmin == 3);
  CHECK(rep.proxy_c ==
        doctest::Approx(8.0 * (1.0 - 3.0 / kPi)).epsilon(1e-12));
  CHECK(rep.sigma == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(rep.theta_sup == theta_sup_annulus(kPRat));
  CHECK(rep.scan_depth == 60);

  double plain = 1.0 - std::sqrt(std::abs(kPRat));
  double expected = std::min(plain * plain, rep.proxy_c) / rep.theta_sup *
                    std::exp(log_ppinf_sq(std::abs(kPRat)));
  CHECK(rep.z_bound == doctest::Approx(expected).epsilon(1e-13));
  CHECK(rep.z_bound > 0.0);

  // Partial sums at 90% of the domain are Cauchy: the scaled-theta term
  // recursion keeps every intermediate in range.
  cplx z = cplx(0.9 * rep.z_bound, 0.0);
  cplx sum = cplx(1.0, 0.0);
  cplx term = cplx(1.0, 0.0);
  cplx pw = cplx(1.0, 0.0);  // q^{n-1}
  cplx sum_at_250 = sum;
  double final_term = 0.0;
  for (int n = 1; n <= 400; ++n) {
    ThetaEval num = theta_scaled(t0 * pw, kPRat);
    ThetaEval den = theta_scaled(kQRat * pw, kPRat);
    term *= z * (num.value / den.value).to_complex();
    sum += term;
    pw *= kQRat;
    if (n == 250) sum_at_250 = sum;
    if (n == 400) final_term = std::abs(term);
  }
  CHECK(std::abs(sum - sum_at_250) < 1e-10);
  CHECK(final_term < 1e-12);
  CHECK(std::abs(sum - cplx(1.0, 0.0)) > 1e-3);  // a genuinely nontrivial sum

  // The generic evaluator reproduces the hand-rolled recursion.
  SeriesSpec one_param;
  one_param.t = {t0};
  one_param.q = kQRat;
  one_param.nome = Nome::from_p(kPRat);
  PartialSumResult direct = eval_sEr(one_param, z);
  CHECK(direct.converged);
  CHECK(rel_err(direct.value, sum) < 1e-10);
}

TEST_CASE("one-parameter z-domain: small-p closed form and degenerate proxies") {
  // As p -> 0 the series degenerates to (t0 z; q)_inf / (z; q)_inf; the
  // reported domain must stay where that closed form (and its q-series)
  // converge, i.e. inside the unit disc.
  for (double small_p : {1e-4, 1e-6}) {
    CAPTURE(small_p);
    cplx q = std::polar(0.5, 0.9);
    cplx t0 = 2.0 * q;
    ZBoundReport rep = z_bound_1E0(t0, q, cplx(small_p, 0.0),
                                   Rationality::irrational(), 150);
    CHECK(rep.z_bound > 0.0);
    CHECK(rep.z_bound < 1.0);

    cplx z = cplx(0.999 * rep.z_bound, 0.0);
    cplx closed = qpochhammer_inf(t0 * z, q) / qpochhammer_inf(z, q);
    CHECK(std::isfinite(std::abs(closed)));

    PartialSumResult series = eval_qhyper({t0}, {}, q, z);
    CHECK(series.converged);
    CHECK(rel_err(series.value, closed) < 1e-9);
  }

  // |t0| < |q| drives the sigma-route weights to zero geometrically; deep
  // scans underflow the proxy and no positive domain can be reported.
  CHECK_THROWS_AS(z_bound_1E0(0.5 * kQRat, kQRat, kPRat,
                              Rationality::rational(1, 2), 4000),
                  NonPositiveInfimumProxy);

  CHECK_THROWS_AS(z_bound_1E0(cplx(0.0, 0.0), kQRat, kPRat,
                              Rationality::rational(1, 2), 50),
                  ZeroArgument);
}

TEST_CASE("sigma admissibility: finite-depth continued-fraction check") {
  // The sharper condition on sigma asks that its convergent denominators
  // q_k grow slowly against the base:
  //
  //   limsup_k log(q_{k+1}) / q_k^2 < -(a^2 / 2) log|p|.
  //
  // A limsup cannot be certified from finite data, so this renders the
  // check at finite depth for the rational-alpha fixture, where sigma =
  // 1/pi and the right-hand side is -log(0.25)/2.
  CfGrowthReport cf = cf_growth_probe(1.0 / kPi, 12);
  REQUIRE(cf.denominators.size() >= 6);
  REQUIRE_FALSE(cf.terminated);
  double worst = 0.0;
  for (std::size_t k = cf.denominators.size() / 2;
       k + 1 < cf.denominators.size(); ++k) {
    double qk = cf.denominators[k];
    worst = std::max(worst, std::log(cf.denominators[k + 1]) / (qk * qk));
  }
  double rhs = -0.5 * std::log(std::abs(kPRat));
  CHECK(worst < rhs);
  // The margin is enormous (the denominators of 1/pi grow fast enough to
  // crush the quadratic weight); record that it is strict, not marginal.
  CHECK(worst < 1e-6 * rhs);
}

TEST_CASE("bounds domain guards") {
  Rationality irr = Rationality::irrational();
  CHECK_THROWS_AS(alpha_decomposition(cplx(1.2, 0.0), cplx(0.3, 0.0), 1, irr),
                  OutsideDomain);
  CHECK_THROWS_AS(alpha_decomposition(cplx(0.5, 0.0), cplx(0.0, 0.0), 1, irr),
                  DegenerateParameters);
  CHECK_THROWS_AS(alpha_decomposition(cplx(0.5, 0.0), cplx(1.1, 0.0), 1, irr),
                  DivergedModulus);
  CHECK_THROWS_AS(alpha_decomposition(cplx(0.0, 0.0), cplx(0.3, 0.0), 1, irr),
                  ZeroArgument);
  CHECK_THROWS_AS(alpha_decomposition(cplx(0.5, 0.0), cplx(0.3, 0.0), 0, irr),
                  ConstraintViolation);

  CHECK_THROWS_AS(z_bound_0E0(cplx(0.5, 0.0), cplx(0.3, 0.0), irr, 0),
                  ConstraintViolation);
  CHECK_THROWS_AS(z_bound_0E0(cplx(0.5, 0.0), cplx(0.3, 0.0), irr, 2'000'000),
                  ConstraintViolation);
  CHECK_THROWS_AS(
      z_bound_0E0(std::polar(0.6, 0.2), cplx(0.3, 0.0),
                  Rationality::rational(1, 2), 10),
      ConstraintViolation);
}
