#pragma once

#include <stdexcept>
#include <string>

namespace p2dyn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define P2DYN_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                         \
        explicit Name(const std::string& msg) : Error(msg) {}     \
    }

P2DYN_DEFINE_ERROR(ZeroVector);
P2DYN_DEFINE_ERROR(Indeterminate);
P2DYN_DEFINE_ERROR(DegenerateMap);
P2DYN_DEFINE_ERROR(NoConvergence);
P2DYN_DEFINE_ERROR(IllConditioned);
P2DYN_DEFINE_ERROR(RootFailure);
P2DYN_DEFINE_ERROR(DegenerateFiber);
P2DYN_DEFINE_ERROR(ExceptionalStart);
P2DYN_DEFINE_ERROR(CriticalHit);
P2DYN_DEFINE_ERROR(InconsistentCocycle);
P2DYN_DEFINE_ERROR(NoSplitting);
P2DYN_DEFINE_ERROR(NewtonStall);
P2DYN_DEFINE_ERROR(CriticalCollision);
P2DYN_DEFINE_ERROR(InsufficientData);
P2DYN_DEFINE_ERROR(SupportViolation);
P2DYN_DEFINE_ERROR(OutOfDomain);
P2DYN_DEFINE_ERROR(ConfigError);

#undef P2DYN_DEFINE_ERROR

}  // namespace p2dyn
