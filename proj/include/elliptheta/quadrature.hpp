#pragma once
// Double-exponential (tanh-sinh) quadrature on finite intervals.
//
// The substitution x = tanh((pi/2) sinh t) pushes endpoint singularities
// into super-exponentially small weights, so integrable log singularities
// at interval ends need no special casing.  Interior singular points must
// be supplied as split points; integrate_split runs one tanh-sinh pass per
// subinterval and combines the pieces.

#include <functional>
#include <vector>

#include "elliptheta/core.hpp"
#include "elliptheta/errors.hpp"

namespace elliptheta {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;       // last level-to-level difference (+ tail bounds)
  int levels = 0;         // refinement levels actually used
  bool converged = false;
};

QuadResult integrate_ts(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_level = 12);

// Splits (a,b) at the given interior points (clamped, deduplicated) and
// integrates each piece to abs_tol / n_pieces.
QuadResult integrate_split(const std::function<double(double)>& f, double a,
                           double b, std::vector<double> interior,
                           double abs_tol, int max_level = 12);

}  // namespace elliptheta
