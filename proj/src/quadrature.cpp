#include "elliptheta/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace elliptheta {

namespace {

constexpr double kTMax = 4.0;  // tanh((pi/2) sinh 4) is 1 to ~1e-37

// Trapezoid contribution at step h; odd_only adds just the nodes new to
// this refinement level.
double ts_level(const std::function<double(double)>& f, double mid,
                double half, double h, bool odd_only) {
  double acc = 0.0, comp = 0.0;
  auto accumulate = [&](double v) {  // Neumaier compensation
    double t = acc + v;
    if (std::abs(acc) >= std::abs(v))
      comp += (acc - t) + v;
    else
      comp += (v - t) + acc;
    acc = t;
  };
  for (long long j = odd_only ? 1 : 0;; j += odd_only ? 2 : 1) {
    const double t = double(j) * h;
    if (t > kTMax) break;
    const double u = 0.5 * kPi * std::sinh(t);
    const double x = std::tanh(u);
    // Past here the node rounds onto the endpoint itself; evaluating f there
    // divides by zero for singular integrands.  The dropped tail is harmless
    // for log-type singularities (mass below ~1e-16 of the endpoint).
    if (x == 1.0) break;
    const double ch = std::cosh(u);
    const double w = 0.5 * kPi * std::cosh(t) / (ch * ch);
    accumulate(w * f(mid + half * x));
    if (j > 0) accumulate(w * f(mid - half * x));
    if (j > 0 && w < 1e-18) break;
  }
  return acc + comp;
}

}  // namespace

QuadResult integrate_ts(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_level) {
  QuadResult res;
  if (!(b > a)) {
    res.converged = true;
    return res;
  }
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double h = 1.0;
  double nodes = ts_level(f, mid, half, h, false);  // sum of w*f over node set
  double value_prev = half * h * nodes;
  res.value = value_prev;
  for (int lev = 1; lev <= max_level; ++lev) {
    h *= 0.5;
    nodes += ts_level(f, mid, half, h, true);
    const double value = half * h * nodes;
    res.levels = lev;
    res.err = std::abs(value - value_prev);
    res.value = value;
    if (lev >= 3 && res.err <= abs_tol) {
      res.converged = true;
      return res;
    }
    value_prev = value;
  }
  return res;
}

QuadResult integrate_split(const std::function<double(double)>& f, double a,
                           double b, std::vector<double> interior,
                           double abs_tol, int max_level) {
  std::vector<double> cuts{a, b};
  for (double x : interior)
    if (x > a + 1e-12 && x < b - 1e-12) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double u, double v) { return v - u < 1e-12; }),
             cuts.end());
  if (cuts.back() < b) cuts.back() = b;

  QuadResult total;
  total.converged = true;
  const double piece_tol = abs_tol / double(cuts.size() - 1);
  KahanSum vsum;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadResult piece = integrate_ts(f, cuts[i], cuts[i + 1], piece_tol, max_level);
    vsum.add(cplx{piece.value, 0.0});
    total.err += piece.err;
    total.levels = std::max(total.levels, piece.levels);
    total.converged = total.converged && piece.converged;
  }
  total.value = vsum.value().real();
  return total;
}

}  // namespace elliptheta
