#include "elliptheta/lineint.hpp"

#include <cmath>

#include "elliptheta/theta.hpp"

namespace elliptheta {

namespace {

double im_tau_of(const LineSpec& line) {
  const double it = line.nome.tau.imag();
  if (!(it > 0.0) || !std::isfinite(it))
    throw OutsideDomain("line integral: needs 0 < Im tau < inf");
  return it;
}

void require_line(const LineSpec& line) {
  if (line.N == 0 && line.M == 0)
    throw ConstraintViolation("line integral: (N, M) = (0, 0)");
}

// Integrands take their values through exp(log t + 2pi i x (N+M tau)) so the
// modulus decay is exact in x; log-magnitudes are clamped at -500 (an exact
// theta zero on a quadrature node is an integrable spike of measure zero).
constexpr double kLogClamp = -500.0;

}  // namespace

double mu_angle(cplx t, const LineSpec& line) {
  if (t == cplx{0.0, 0.0}) throw ZeroArgument("mu_angle: t = 0");
  if (line.M == 0) throw ConstraintViolation("mu_angle: needs M != 0");
  const double it = im_tau_of(line);
  const double re_l = double(line.N) + double(line.M) * line.nome.tau.real();
  return std::arg(t) + re_l * std::log(std::abs(t)) / (double(line.M) * it);
}

cplx mu_unit(cplx t, const LineSpec& line) {
  return std::polar(1.0, mu_angle(t, line));
}

double log_one_minus_line_integral(cplx t, const LineSpec& line) {
  require_line(line);
  if (t == cplx{0.0, 0.0}) throw ZeroArgument("line integral: t = 0");
  if (line.M <= 0) throw ConstraintViolation("log_one_minus_line_integral: needs M > 0");
  const double it = im_tau_of(line);
  const double M = double(line.M);
  const cplx L{double(line.N) + M * line.nome.tau.real(), M * it};
  const double r = std::abs(t);

  auto inside = [&](cplx u) {  // |u| <= 1 branch
    return (dilog(u) / (kTwoPi * kI * L)).real();
  };
  auto outside = [&](cplx u) {  // |u| >= 1 branch
    const double lu = std::log(std::abs(u));
    return lu * lu / (4.0 * kPi * M * it) - inside(1.0 / u) -
           M * it * dilog_circle_re(mu_angle(u, line)) / (kPi * std::norm(L));
  };

  if (std::abs(r - 1.0) <= 1e-13) {
    const double a = inside(t), b = outside(t);
    if (std::abs(a - b) > 1e-10)
      throw NotConverged("log_one_minus_line_integral: branch formulas disagree at |t| = 1");
    return 0.5 * (a + b);
  }
  return r < 1.0 ? inside(t) : outside(t);
}

double log_theta_line_mean(cplx t, const LineSpec& line) {
  require_line(line);
  if (t == cplx{0.0, 0.0}) throw ZeroArgument("log_theta_line_mean: t = 0");
  if (line.nome.p == cplx{0.0, 0.0})
    throw OutsideDomain("log_theta_line_mean: needs p != 0 (take Im tau large instead)");
  const double it = im_tau_of(line);
  const double l = std::log(std::abs(t));

  if (line.M < 0) {
    // x -> 1-x sends e^{2pi i x L} to e^{2pi i L} e^{-2pi i x L} = p^M e^{-2pi i x L}.
    const cplx t_flip = t * std::exp(double(line.M) * std::log(line.nome.p));
    return log_theta_line_mean(t_flip, LineSpec{-line.N, -line.M, line.nome});
  }
  if (line.M == 0) {
    // The x-average winds the unit circle |N| times, so only the degenerate
    // transverse coordinate e^{i log|t| / Im tau} survives.
    return l * l / (4.0 * kPi * it) + 0.5 * l + kPi * it / 6.0 -
           (it / kPi) * dilog_circle_re(l / it);
  }
  const double M = double(line.M);
  const cplx L{double(line.N) + M * line.nome.tau.real(), M * it};
  const long long D = line.D();
  const double ang_md = mu_angle(t, line) * M / double(D);
  return l * l / (4.0 * kPi * it) - 0.5 * l * (M - 1.0) +
         kPi * it * (M - 1.0) * (2.0 * M - 1.0) / 6.0 -
         double(D) * double(D) * it * dilog_circle_re(ang_md) / (kPi * std::norm(L));
}

QuadResult log_one_minus_line_quad(cplx t, const LineSpec& line, double abs_tol) {
  require_line(line);
  if (t == cplx{0.0, 0.0}) throw ZeroArgument("log_one_minus_line_quad: t = 0");
  if (line.M <= 0) throw ConstraintViolation("log_one_minus_line_quad: needs M > 0");
  const double it = im_tau_of(line);
  const double M = double(line.M);
  const double decay = kTwoPi * M * it;  // |u(x)| = |t| e^{-decay x}
  const double l = std::log(std::abs(t));
  const double arg_t = std::arg(t);
  const double re_l = double(line.N) + M * line.nome.tau.real();

  auto integrand = [&](double x) {
    const cplx u = std::exp(cplx{l - decay * x, arg_t + kTwoPi * re_l * x});
    const double v = std::log(std::abs(1.0 - u));
    return std::max(v, kLogClamp);
  };

  // Truncate where |u| < 1e-12; past that |log|1-u|| <= 2|u|.
  const double x_star = (l + 27.631021115928547) / decay;
  const double tail = 2e-12 / decay;
  if (x_star <= 0.0) {
    QuadResult res;
    res.converged = true;
    res.err = 2.0 * std::abs(t) / decay;  // whole integral inside this bound
    return res;
  }
  std::vector<double> splits;
  const double x_cross = l / decay;  // |u| = 1
  if (x_cross > 0.0 && x_cross < x_star) splits.push_back(x_cross);
  QuadResult res = integrate_split(integrand, 0.0, x_star, splits, abs_tol);
  res.err += tail;
  return res;
}

QuadResult log_theta_line_quad(cplx t, const LineSpec& line, double abs_tol) {
  require_line(line);
  if (t == cplx{0.0, 0.0}) throw ZeroArgument("log_theta_line_quad: t = 0");
  const cplx p = line.nome.p;
  if (p == cplx{0.0, 0.0})
    throw OutsideDomain("log_theta_line_quad: needs p != 0");
  const double it = im_tau_of(line);
  if (line.M < 0) {
    const cplx t_flip = t * std::exp(double(line.M) * std::log(p));
    return log_theta_line_quad(t_flip, LineSpec{-line.N, -line.M, line.nome}, abs_tol);
  }
  const double M = double(line.M);
  const double l = std::log(std::abs(t));
  const double arg_t = std::arg(t);
  const double re_l = double(line.N) + M * line.nome.tau.real();
  const double decay = kTwoPi * M * it;

  auto integrand = [&](double x) {
    const cplx u = std::exp(cplx{l - decay * x, arg_t + kTwoPi * re_l * x});
    const double v = log_abs_theta(u, p);
    return std::isfinite(v) ? std::max(v, kLogClamp) : kLogClamp;
  };

  // Split where the orbit modulus crosses the zero lattice |p|^k: these are
  // the only places an integrable log spike can sit.
  std::vector<double> splits;
  if (line.M > 0) {
    const double x0 = l / decay;
    const long long k_lo = (long long)std::floor(-x0 * M) - 1;
    const long long k_hi = (long long)std::ceil((1.0 - x0) * M) + 1;
    for (long long k = k_lo; k <= k_hi; ++k) {
      const double x = x0 + double(k) / M;
      if (x > 0.0 && x < 1.0) splits.push_back(x);
    }
  } else {
    // M = 0: |u| is constant; genuine zeros exist only if |t| = |p|^k, and
    // then sit at the |N| phase-aligned points.
    const double lp = std::log(std::abs(p));
    const double k_star = std::round(l / lp);
    if (std::abs(l - k_star * lp) < 1e-6) {
      const double ap = std::arg(p);
      const double base = (k_star * ap - arg_t) / (kTwoPi * double(line.N));
      const long long n_abs = std::llabs(line.N);
      for (long long m = -2 * n_abs - 2; m <= 2 * n_abs + 2; ++m) {
        const double x = base + double(m) / double(line.N);
        if (x > 0.0 && x < 1.0) splits.push_back(x);
      }
    }
  }
  return integrate_split(integrand, 0.0, 1.0, splits, abs_tol);
}

}  // namespace elliptheta
