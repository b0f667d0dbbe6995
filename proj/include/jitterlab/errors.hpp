#pragma once

#include <stdexcept>
#include <string>

namespace jitterlab {

// Base for every error raised by the library. kind() is the stable
// machine-readable tag used in CLI error reports.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define JITTERLAB_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                        \
    public:                                                            \
        using Error::Error;                                            \
        const char* kind() const noexcept override { return #Name; }   \
    }

JITTERLAB_DEFINE_ERROR(DimensionMismatch);
JITTERLAB_DEFINE_ERROR(DomainError);
JITTERLAB_DEFINE_ERROR(IndefiniteMatrix);
JITTERLAB_DEFINE_ERROR(SingularSystem);
JITTERLAB_DEFINE_ERROR(SingularCovariance);
JITTERLAB_DEFINE_ERROR(UnstableModel);
JITTERLAB_DEFINE_ERROR(NotConverged);
JITTERLAB_DEFINE_ERROR(EmptyPassband);
JITTERLAB_DEFINE_ERROR(SingularInnovation);
JITTERLAB_DEFINE_ERROR(SingularPrediction);
JITTERLAB_DEFINE_ERROR(ConfigError);
JITTERLAB_DEFINE_ERROR(SchemaError);

#undef JITTERLAB_DEFINE_ERROR

}  // namespace jitterlab
