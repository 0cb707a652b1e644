#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy for the elliptheta library.
//
// All numerical-domain failures are reported as exceptions derived from
// elliptheta::Error so callers can catch the whole family at once.  Each
// class corresponds to one failure mode of one or more operations; the
// what() string carries the offending quantity where that helps debugging.

namespace elliptheta {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define ELLIPTHETA_DEFINE_ERROR(NAME)                            \
  class NAME : public Error {                                    \
   public:                                                       \
    explicit NAME(const std::string& msg = #NAME) : Error(msg) {} \
  }

// |p| >= 1: infinite products over powers of p do not converge.
ELLIPTHETA_DEFINE_ERROR(DivergedModulus);
// A truncated product/sum hit its term cap before meeting tolerance.
ELLIPTHETA_DEFINE_ERROR(TruncationExceeded);
// z == 0 passed where the function has an essential singularity.
ELLIPTHETA_DEFINE_ERROR(ZeroArgument);
// Iterative evaluation failed to stabilize (lattice sums, residual loops).
ELLIPTHETA_DEFINE_ERROR(NotConverged);
// Auxiliary evaluation point landed on a zero of the scaling factor.
ELLIPTHETA_DEFINE_ERROR(SingularAuxiliary);
// A series coefficient denominator vanished: parameter hits the zero lattice.
ELLIPTHETA_DEFINE_ERROR(PoleHit);
// |R z^b| == 1: the closed-form geometric tail sits on its circle of poles.
ELLIPTHETA_DEFINE_ERROR(OnBoundary);
// Function argument outside its mathematical domain.
ELLIPTHETA_DEFINE_ERROR(OutsideDomain);
// A sampled point left the disc where the series is reliably summable.
ELLIPTHETA_DEFINE_ERROR(OutsideRadius);
// A parameter sits on the geometric line spanned by powers of q, where
// fractional-position quantities are ill-defined.
ELLIPTHETA_DEFINE_ERROR(OnLine);
// Parameter products violate the required balancing identity.
ELLIPTHETA_DEFINE_ERROR(Unbalanced);
// A structural precondition on integer/real parameters failed.
ELLIPTHETA_DEFINE_ERROR(ConstraintViolation);
// A recurrence denominator vanished for the supplied parameters.
ELLIPTHETA_DEFINE_ERROR(DegenerateParameters);
// Evaluation point lies on the principal-branch cut of a non-integer power.
ELLIPTHETA_DEFINE_ERROR(BranchCut);
// A lattice-reduction produced an unexpectedly degenerate point.
ELLIPTHETA_DEFINE_ERROR(LatticeDegenerate);
// The series itself is undefined for the supplied parameters (coefficient
// denominators vanish infinitely often).
ELLIPTHETA_DEFINE_ERROR(UndefinedSeries);
// An infimum proxy collapsed to a non-positive value; no bound can be given.
ELLIPTHETA_DEFINE_ERROR(NonPositiveInfimumProxy);
// Continued-fraction expansion exhausted double precision.
ELLIPTHETA_DEFINE_ERROR(PrecisionExhausted);
// An orbit point came close enough to a pole to poison an average.
ELLIPTHETA_DEFINE_ERROR(PoleProximity);
// Malformed job input (CLI layer).
ELLIPTHETA_DEFINE_ERROR(ParseError);

#undef ELLIPTHETA_DEFINE_ERROR

}  // namespace elliptheta
