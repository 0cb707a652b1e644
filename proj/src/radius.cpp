#include "elliptheta/radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "elliptheta/errors.hpp"

namespace elliptheta {

namespace {

// Distance of a real number from the nearest integer.
double lattice_distance(double x) {
  double f = frac_part(x);
  return std::min(f, 1.0 - f);
}

void require_finite_lattice(const Nome& nome, const char* who) {
  if (!std::isfinite(nome.im_tau()) || nome.p == cplx{0.0, 0.0}) {
    throw DegenerateParameters(std::string(who) +
                               ": the line requires a finite lattice (p != 0)");
  }
}

// The spec and the line must describe the same lattice.
void require_same_nome(const Nome& a, const Nome& b, const char* who) {
  if (std::abs(a.p - b.p) > 1e-12 * (1.0 + std::abs(a.p))) {
    throw ConstraintViolation(std::string(who) +
                              ": spec and line carry different nomes");
  }
}

void require_q_on_line(cplx q, const LineSpec& line, const char* who) {
  if (lattice_distance(transverse_coordinate(q, line)) > kOnLineTol) {
    throw ConstraintViolation(std::string(who) +
                              ": the base q does not lie on the line");
  }
}

LineSpec reduced_line(const LineSpec& line) {
  long long d = line.D();
  return LineSpec{line.N / d, line.M / d, line.nome};
}

bool rel_close(cplx a, cplx b) {
  return std::abs(a - b) <= kClassifyTol * std::abs(b);
}

// Fractional position of a generic parameter, guarded: parameters on the
// line are rejected.  Exact q-coincidences are resolved by the callers
// *before* this guard runs.
double checked_position(cplx x, const LineSpec& line, const char* who) {
  double pos = fractional_position(x, line);
  if (lattice_distance(pos) < kOnLineTol) {
    throw OnLine(std::string(who) + ": parameter " + std::to_string(x.real()) +
                 (x.imag() < 0 ? " - " : " + ") +
                 std::to_string(std::abs(x.imag())) + "i lies on the line");
  }
  return pos;
}

double sq(double x) { return x * x; }

// Scalar Kahan-Neumaier accumulator (KahanSum is complex-valued).
struct RealKahan {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  double value() const { return s + c; }
};

// Checkpoint lengths 1, 2, 5, 10, 20, 50, ... up to and including n.
std::vector<long long> checkpoint_grid(long long n) {
  std::vector<long long> grid;
  for (long long base = 1; base <= n && base > 0; base *= 10) {
    for (long long mult : {1LL, 2LL, 5LL}) {
      long long m = base * mult;
      if (m <= n) grid.push_back(m);
    }
  }
  if (grid.empty() || grid.back() != n) grid.push_back(n);
  return grid;
}

// Shared core of the two balanced-sum routes.  include_t0 extends the sum
// by the (t_0, w_0 = q) pair.
RadiusReport balanced_sum(const SeriesSpec& spec, const LineSpec& line,
                          bool include_t0, const char* who) {
  spec.validate();
  line.validate();
  require_finite_lattice(line.nome, who);
  require_same_nome(spec.nome, line.nome, who);
  require_q_on_line(spec.q, line, who);

  BalanceReport br = check_balancing(spec);  // also enforces s = r + 1
  if (!br.balanced) {
    throw Unbalanced(std::string(who) + ": balancing defect " +
                     std::to_string(br.balance_dev));
  }
  if (!include_t0 && !rel_close(spec.t[0], spec.q)) {
    throw ConstraintViolation(
        std::string(who) +
        ": first numerator parameter must equal q "
        "(the free-t_0 form is radius_singular)");
  }

  LineSpec red = reduced_line(line);
  double imt = line.nome.im_tau();
  double dd = std::norm(red.direction());

  RadiusReport rep;
  rep.method = include_t0 ? RadiusMethod::singular : RadiusMethod::balanced;

  RealKahan sum;
  if (include_t0) {
    // k = 0 pair (t_0, q): a_0 = 0 exactly; a q-coincident t_0 cancels the
    // whole term symbolically.
    rep.alpha.push_back(0.0);
    if (rel_close(spec.t[0], spec.q)) {
      rep.beta.push_back(0.0);
    } else {
      double b0 = checked_position(spec.t[0], red, who);
      rep.beta.push_back(b0);
      sum.add((sq(std::log(std::abs(spec.t[0]))) -
               sq(std::log(std::abs(spec.q)))) /
              (4.0 * kPi * imt));
      sum.add(kPi * imt / dd * (-b0 * (b0 - 1.0)));
    }
  }
  for (std::size_t k = 1; k < spec.t.size(); ++k) {
    cplx tk = spec.t[k];
    cplx wk = spec.w[k - 1];
    double bk = rel_close(tk, spec.q) ? 0.0 : checked_position(tk, red, who);
    double ak = rel_close(wk, spec.q) ? 0.0 : checked_position(wk, red, who);
    rep.beta.push_back(bk);
    rep.alpha.push_back(ak);
    sum.add((sq(std::log(std::abs(tk))) - sq(std::log(std::abs(wk)))) /
            (4.0 * kPi * imt));
    sum.add(kPi * imt / dd * (ak * (ak - 1.0) - bk * (bk - 1.0)));
  }
  rep.log_rc_inv = sum.value();
  return rep;
}

RadiusReport empirical_core(const std::function<double(cplx)>& log_abs_h,
                            const QSpec& base, long long n) {
  if (n < 1) {
    throw ConstraintViolation("empirical_log_average: need n >= 1");
  }
  base.validate();
  require_finite_lattice(base.nome, "empirical_log_average");

  cplx d = cplx(double(base.N), 0.0) + cplx(double(base.M), 0.0) * base.nome.tau;
  std::vector<long long> grid = checkpoint_grid(n);

  RadiusReport rep;
  rep.method = RadiusMethod::empirical;
  rep.empirical_checkpoints = grid;
  rep.empirical_trace.reserve(grid.size());

  RealKahan acc;
  std::size_t next_cp = 0;
  for (long long k = 0; k < n; ++k) {
    cplx u = std::exp(kTwoPi * kI * frac_part(double(k) * base.chi) * d);
    double lh;
    try {
      lh = log_abs_h(u);
    } catch (const PoleHit& e) {
      throw PoleProximity(std::string(e.what()) + " (orbit index " +
                          std::to_string(k) + ")");
    }
    if (!std::isfinite(lh)) {
      throw PoleProximity(
          "empirical_log_average: |H| vanished or blew up on the orbit "
          "(orbit index " +
          std::to_string(k) + ")");
    }
    acc.add(lh);
    if (k + 1 == grid[next_cp]) {
      rep.empirical_trace.push_back(acc.value() / double(k + 1));
      ++next_cp;
    }
  }
  rep.log_rc_inv = acc.value() / double(n);
  return rep;
}

}  // namespace

double transverse_coordinate(cplx x, const LineSpec& line) {
  if (x == cplx{0.0, 0.0}) {
    throw ZeroArgument("transverse_coordinate: zero parameter");
  }
  line.validate();
  require_finite_lattice(line.nome, "transverse_coordinate");
  cplx d = line.direction();
  return (std::conj(d) * std::log(x)).real() / (kTwoPi * line.nome.im_tau());
}

double fractional_position(cplx x, const LineSpec& line) {
  return frac_part(transverse_coordinate(x, line));
}

HphiCoordinates hphi_extract(cplx x, const QSpec& base) {
  if (x == cplx{0.0, 0.0}) throw ZeroArgument("hphi_extract: zero parameter");
  base.validate();
  require_finite_lattice(base.nome, "hphi_extract");
  if (base.chi == 0.0) {
    throw DegenerateParameters("hphi_extract: chi = 0 has no longitudinal scale");
  }
  cplx d = cplx(double(base.N), 0.0) + cplx(double(base.M), 0.0) * base.nome.tau;
  cplx proj = std::conj(d) * std::log(x);
  HphiCoordinates c;
  c.h = proj.imag() / (kTwoPi * base.chi * std::norm(d));
  c.phi = proj.real() / (kTwoPi * base.nome.im_tau());
  return c;
}

cplx coordinate_point(double h, double phi, const QSpec& base) {
  base.validate();
  require_finite_lattice(base.nome, "coordinate_point");
  cplx d = cplx(double(base.N), 0.0) + cplx(double(base.M), 0.0) * base.nome.tau;
  return std::exp(h * base.log_q() +
                  phi * kTwoPi * base.nome.im_tau() / std::conj(d));
}

void WpParametrization::validate() const {
  std::size_t r = phi.size();
  if (r == 0 || h.size() != r || h_tilde.size() != r || phi_tilde.size() != r) {
    throw ConstraintViolation(
        "WpParametrization: the four coordinate lists must share a nonzero "
        "length");
  }
  const double tol = 1e-12;
  double phi_const = phi[0] + phi_tilde[0];
  double h_const = h[0] + h_tilde[0];
  double sp = 0.0, spt = 0.0, sh = 0.0, sht = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    if (std::abs(phi[j] + phi_tilde[j] - phi_const) >
        tol * std::max(1.0, std::abs(phi_const))) {
      throw ConstraintViolation(
          "WpParametrization: phi_j + phi_tilde_j is not constant");
    }
    if (std::abs(h[j] + h_tilde[j] - h_const) >
        tol * std::max(1.0, std::abs(h_const))) {
      throw ConstraintViolation(
          "WpParametrization: h_j + h_tilde_j is not constant");
    }
    sp += phi[j];
    spt += phi_tilde[j];
    sh += h[j];
    sht += h_tilde[j];
  }
  if (std::abs(sp - spt) > tol * std::max(1.0, std::abs(sp)) ||
      std::abs(sh - sht) > tol * std::max(1.0, std::abs(sh))) {
    throw ConstraintViolation(
        "WpParametrization: coordinate sums differ between the two sides");
  }
}

RadiusReport radius_balanced(const SeriesSpec& spec, const LineSpec& line) {
  return balanced_sum(spec, line, false, "radius_balanced");
}

RadiusReport radius_singular(const SeriesSpec& spec, const LineSpec& line) {
  return balanced_sum(spec, line, true, "radius_singular");
}

RadiusReport radius_wellpoised(const WpParametrization& wp,
                               const LineSpec& line) {
  wp.validate();
  line.validate();
  require_finite_lattice(line.nome, "radius_wellpoised");
  if (line.D() != 1) {
    throw ConstraintViolation(
        "radius_wellpoised: coordinates are measured against a primitive "
        "direction (gcd(N, M) = 1)");
  }
  double imt = line.nome.im_tau();
  double dd = std::norm(line.direction());

  RadiusReport rep;
  rep.method = RadiusMethod::wellpoised;
  RealKahan sum;
  for (std::size_t j = 0; j < wp.phi.size(); ++j) {
    double b = frac_part(wp.phi[j]);
    double a = frac_part(wp.phi_tilde[j]);
    rep.beta.push_back(b);
    rep.alpha.push_back(a);
    sum.add((a - b) * (a + b - 1.0));
  }
  rep.log_rc_inv = kPi * imt / dd * sum.value();
  return rep;
}

WpExample construct_wp_example(int r, int k, double lambda, const QSpec& base,
                               const std::vector<double>& h) {
  base.validate();
  require_finite_lattice(base.nome, "construct_wp_example");
  if (r <= 2) {
    throw ConstraintViolation("construct_wp_example: need r > 2");
  }
  if (k < 0 || 2 * (k + 1) > r) {
    throw ConstraintViolation(
        "construct_wp_example: need 0 <= k with k + 1 <= r/2");
  }
  if (!(lambda > 0.0 && lambda < 1.0 - 2.0 / r)) {
    throw ConstraintViolation(
        "construct_wp_example: need 0 < lambda < 1 - 2/r");
  }
  if (static_cast<int>(h.size()) != r) {
    throw ConstraintViolation(
        "construct_wp_example: need one longitudinal coordinate per "
        "parameter (h.size() == r)");
  }

  double eps = (k + 1) / (r / 2.0 + lambda);
  std::vector<double> phi(static_cast<std::size_t>(r), 1.0 - eps);
  phi[0] = 1.0 + eps * r / 2.0;

  double sp = 0.0, sh = 0.0;
  for (int j = 0; j < r; ++j) {
    sp += phi[j];
    sh += h[j];
  }
  double phi_bar = 2.0 * sp / r;
  double h_bar = 2.0 * sh / r;

  WpExample ex;
  ex.wp.h = h;
  ex.wp.phi = phi;
  for (int j = 0; j < r; ++j) {
    ex.wp.h_tilde.push_back(h_bar - h[j]);
    ex.wp.phi_tilde.push_back(phi_bar - phi[j]);
  }

  ex.spec.q = base.q();
  ex.spec.nome = base.nome;
  ex.spec.t.push_back(ex.spec.q);
  for (int j = 0; j < r; ++j) {
    ex.spec.t.push_back(coordinate_point(h[j], phi[j], base));
    ex.spec.w.push_back(
        coordinate_point(ex.wp.h_tilde[j], ex.wp.phi_tilde[j], base));
  }

  ex.report = radius_wellpoised(ex.wp, LineSpec{base.N, base.M, base.nome});
  return ex;
}

RadiusReport radius_vwp(const VwpSpec& spec, const LineSpec& line) {
  spec.validate();
  line.validate();
  require_finite_lattice(line.nome, "radius_vwp");
  require_same_nome(spec.nome, line.nome, "radius_vwp");
  if (line.D() != 1) {
    throw ConstraintViolation(
        "radius_vwp: the doubled-argument assembly needs a primitive "
        "direction (gcd(N, M) = 1)");
  }
  require_q_on_line(spec.q, line, "radius_vwp");

  double imt = line.nome.im_tau();
  double dd = std::norm(line.direction());

  // k = 0: the pair (t0, w_0 = q); t0 must be off the line.
  double phi0 = checked_position(spec.t0, line, "radius_vwp");

  RadiusReport rep;
  rep.method = RadiusMethod::vwp;
  rep.beta.push_back(phi0);
  rep.alpha.push_back(0.0);

  RealKahan sum;
  sum.add((0.0 - phi0) * (0.0 + phi0 - 1.0));
  for (cplx tk : spec.t) {
    double b, a;
    if (rel_close(tk, spec.q)) {
      // Pair (q, t0): both positions are exact by intent.
      b = 0.0;
      a = phi0;
    } else if (rel_close(tk, spec.t0)) {
      // Pair (t0, q).
      b = phi0;
      a = 0.0;
    } else {
      b = checked_position(tk, line, "radius_vwp");
      a = checked_position(spec.q * spec.t0 / tk, line, "radius_vwp");
    }
    rep.beta.push_back(b);
    rep.alpha.push_back(a);
    sum.add((a - b) * (a + b - 1.0));
  }
  rep.log_rc_inv = kPi * imt / dd * sum.value();
  return rep;
}

RadiusReport empirical_log_average(const SeriesSpec& spec, const QSpec& base,
                                   long long n) {
  spec.validate();
  base.validate();
  require_same_nome(spec.nome, base.nome, "empirical_log_average");
  if (!rel_close(spec.q, base.q())) {
    throw ConstraintViolation(
        "empirical_log_average: the spec base q and the orbit base disagree");
  }
  BalanceReport br = check_balancing(spec);
  if (!br.balanced) {
    throw Unbalanced(
        "empirical_log_average: orbit reduction uses the p-periodicity of H, "
        "which needs a balanced spec (defect " +
        std::to_string(br.balance_dev) + ")");
  }
  if (rel_close(spec.t[0], spec.q)) {
    return empirical_core(
        [&spec](cplx u) { return std::log(std::abs(series_H(spec, u))); },
        base, n);
  }
  return empirical_core(
      [&spec](cplx u) { return std::log(std::abs(term_ratio_at(spec, u))); },
      base, n);
}

RadiusReport empirical_log_average(const std::function<cplx(cplx)>& H,
                                   const QSpec& base, long long n) {
  return empirical_core(
      [&H](cplx u) { return std::log(std::abs(H(u))); }, base, n);
}

double orbit_log_sup(const std::function<cplx(cplx)>& H, const QSpec& base,
                     long long n) {
  if (n < 1) throw ConstraintViolation("orbit_log_sup: need n >= 1");
  base.validate();
  require_finite_lattice(base.nome, "orbit_log_sup");
  cplx d = cplx(double(base.N), 0.0) + cplx(double(base.M), 0.0) * base.nome.tau;
  double sup = -std::numeric_limits<double>::infinity();
  for (long long k = 0; k < n; ++k) {
    cplx u = std::exp(kTwoPi * kI * frac_part(double(k) * base.chi) * d);
    double lh;
    try {
      lh = std::log(std::abs(H(u)));
    } catch (const PoleHit& e) {
      throw PoleProximity(std::string(e.what()) + " (orbit index " +
                          std::to_string(k) + ")");
    }
    if (!std::isfinite(lh)) {
      throw PoleProximity(
          "orbit_log_sup: |H| vanished or blew up on the orbit (orbit index " +
          std::to_string(k) + ")");
    }
    sup = std::max(sup, lh);
  }
  return sup;
}

CfGrowthReport cf_growth_probe(double chi, int depth) {
  if (depth < 1 || depth > 60) {
    throw ConstraintViolation("cf_growth_probe: depth must lie in [1, 60]");
  }
  if (!std::isfinite(chi)) {
    throw OutsideDomain("cf_growth_probe: chi must be finite");
  }
  // The convergents of a double are meaningful only while q_k^2 < 1/eps;
  // beyond that the partial quotients describe the binary rounding of chi,
  // not the intended real number.
  const double denom_limit = 6.7e7;
  // Residual fractions below this are rounding residue: treat the expansion
  // as terminated (chi is numerically rational).
  const double term_cutoff = 1e-12;

  CfGrowthReport rep;
  rep.denominators.push_back(1.0);
  double x = frac_part(chi);
  double q_prev = 0.0, q_cur = 1.0;
  for (int step = 0; step < depth; ++step) {
    if (x < term_cutoff) {
      rep.terminated = true;
      break;
    }
    double inv = 1.0 / x;
    double a = std::floor(inv);
    x = inv - a;
    double q_next = a * q_cur + q_prev;
    if (q_next > denom_limit) {
      throw PrecisionExhausted(
          "cf_growth_probe: denominators exceed the resolution of a double "
          "at step " +
          std::to_string(step + 1));
    }
    rep.log_ratios.push_back(std::log(q_next) / q_cur);
    rep.denominators.push_back(q_next);
    q_prev = q_cur;
    q_cur = q_next;
  }
  if (!rep.log_ratios.empty()) {
    rep.max_log_ratio =
        *std::max_element(rep.log_ratios.begin(), rep.log_ratios.end());
    std::size_t half = rep.log_ratios.size() / 2;
    rep.tail_log_ratio = *std::max_element(rep.log_ratios.begin() + half,
                                           rep.log_ratios.end());
  }
  rep.growth_flag = !rep.terminated && rep.tail_log_ratio > kCfGrowthThreshold;
  return rep;
}

}  // namespace elliptheta
