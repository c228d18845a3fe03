#pragma once

#include <stdexcept>
#include <string>

namespace rhls {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RHLS_ERROR(Name) \
    struct Name : Error { using Error::Error; }

RHLS_ERROR(OutOfRange);
RHLS_ERROR(DegenerateExponent);
RHLS_ERROR(SingularPoint);
RHLS_ERROR(PoleImage);
RHLS_ERROR(EnvelopeMissing);
RHLS_ERROR(InvalidArgument);
RHLS_ERROR(NotMonotone);
RHLS_ERROR(NegativeValue);
RHLS_ERROR(SignViolation);
RHLS_ERROR(NonPositiveField);
RHLS_ERROR(ZeroFunction);
RHLS_ERROR(RootBracketFailure);
RHLS_ERROR(MomentDiverges);
RHLS_ERROR(Stalled);

#undef RHLS_ERROR

// Carries the best value reached before giving up.
struct NoConvergence : Error {
    double best_value;
    double best_error;
    NoConvergence(const std::string& what, double value, double err)
        : Error(what), best_value(value), best_error(err) {}
};

}  // namespace rhls
