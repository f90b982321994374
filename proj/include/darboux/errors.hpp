#pragma once

#include <stdexcept>
#include <string>

namespace darboux {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Analytic kernel
struct BranchCutError : Error { using Error::Error; };
struct NonFiniteError : Error { using Error::Error; };

// Isoclines
struct PoleError : Error { using Error::Error; };
struct InvalidEpsError : Error { using Error::Error; };
struct TraceStallError : Error { using Error::Error; };

// Dulac solves / continuation
struct NoConvergenceError : Error { using Error::Error; };
struct MonotonicityViolationError : Error { using Error::Error; };
struct ContinuationBreakdownError : Error { using Error::Error; };

// Leaves
struct AtRamificationError : Error { using Error::Error; };
struct LiftAmbiguityError : Error { using Error::Error; };

// Real dynamics
struct SingularApproachError : Error { using Error::Error; };
struct TimeLimitError : Error { using Error::Error; };
struct EscapeFromAnnulusError : Error { using Error::Error; };
struct QuadratureFailureError : Error { using Error::Error; };

// Cyclicity
struct ZeroOnBoundaryError : Error { using Error::Error; };
struct RefinementLimitError : Error { using Error::Error; };
struct SeedInvalidError : Error { using Error::Error; };

// CLI / configuration
struct ConfigError : Error { using Error::Error; };

}  // namespace darboux
