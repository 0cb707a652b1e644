#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

// Shared helpers for the unit/property tests: relative error metrics and
// deterministic random parameter draws (every suite seeds its own engine so
// failures reproduce exactly).

namespace testsupport {

using cplx = std::complex<double>;

inline double rel_err(cplx a, cplx b) {
  double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

inline double rel_err(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

class Draw {
 public:
  explicit Draw(unsigned seed) : eng_(seed) {}

  double real_in(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  int int_in(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }

  // Complex with modulus log-uniform in [lo, hi] and uniform phase.
  cplx annulus(double lo, double hi) {
    double r = std::exp(real_in(std::log(lo), std::log(hi)));
    double phi = real_in(0.0, 2.0 * M_PI);
    return std::polar(r, phi);
  }

  // Nome draw: modulus uniform in (lo, hi), generic phase.
  cplx nome(double lo, double hi) {
    double r = real_in(lo, hi);
    double phi = real_in(0.0, 2.0 * M_PI);
    return std::polar(r, phi);
  }

 private:
  std::mt19937 eng_;
};

}  // namespace testsupport
