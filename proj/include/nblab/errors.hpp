#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace nblab {

// Short rendering of a double for error messages.
inline std::string show(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Every numerical guard raises a subclass of Error so sweeps can catch the
// family and record a flag, while callers that care can catch the exact type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

#define NBLAB_DECLARE_ERROR(Name, tag)                                   \
    class Name : public Error {                                          \
    public:                                                              \
        using Error::Error;                                              \
        const char* kind() const noexcept override { return tag; }       \
    }

NBLAB_DECLARE_ERROR(PoleError, "pole");
NBLAB_DECLARE_ERROR(AccuracyError, "accuracy");
NBLAB_DECLARE_ERROR(DenominatorNearZero, "near_zero");
NBLAB_DECLARE_ERROR(CapacityError, "capacity");
NBLAB_DECLARE_ERROR(RangeError, "range");
NBLAB_DECLARE_ERROR(NodeSingularityError, "node_singularity");
NBLAB_DECLARE_ERROR(SymmetryViolation, "symmetry");
NBLAB_DECLARE_ERROR(DomainError, "domain");
NBLAB_DECLARE_ERROR(EnvelopeError, "envelope");
NBLAB_DECLARE_ERROR(ConditioningError, "conditioning");
NBLAB_DECLARE_ERROR(ConfigError, "config");

#undef NBLAB_DECLARE_ERROR

}  // namespace nblab
