#pragma once

#include <stdexcept>
#include <string>

namespace dspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define DSPEC_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                       \
    public:                                                           \
        using Error::Error;                                           \
        const char* kind() const noexcept override { return #Name; }  \
    };

DSPEC_DEFINE_ERROR(PoleEvaluation)
DSPEC_DEFINE_ERROR(DomainViolation)
DSPEC_DEFINE_ERROR(OutOfDomain)
DSPEC_DEFINE_ERROR(NumericalFailure)
DSPEC_DEFINE_ERROR(BracketFailure)
DSPEC_DEFINE_ERROR(MissedRoot)
DSPEC_DEFINE_ERROR(NotAnEigenvalue)
DSPEC_DEFINE_ERROR(NonPositiveGamma)
DSPEC_DEFINE_ERROR(Unsupported)
DSPEC_DEFINE_ERROR(InsufficientData)
DSPEC_DEFINE_ERROR(AmbiguousZero)
DSPEC_DEFINE_ERROR(ConfigError)

#undef DSPEC_DEFINE_ERROR

}  // namespace dspec
