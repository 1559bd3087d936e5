#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Base for every domain error the library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input / hypothesis failures (CLI exit code 2).
struct HypothesisError : Error { using Error::Error; };
struct UnsupportedOrder : HypothesisError { using HypothesisError::HypothesisError; };
struct UnknownPanel : HypothesisError { using HypothesisError::HypothesisError; };
struct UnknownFlag : HypothesisError { using HypothesisError::HypothesisError; };
struct GeometryMismatch : HypothesisError { using HypothesisError::HypothesisError; };
struct TypePreservationViolation : HypothesisError { using HypothesisError::HypothesisError; };
struct DegenerateDirection : HypothesisError { using HypothesisError::HypothesisError; };
struct SingularBasis : HypothesisError { using HypothesisError::HypothesisError; };
struct BoundaryVertex : HypothesisError { using HypothesisError::HypothesisError; };
struct NotDisjoint : HypothesisError { using HypothesisError::HypothesisError; };
struct EmptyInput : HypothesisError { using HypothesisError::HypothesisError; };
struct NotElliptic : HypothesisError { using HypothesisError::HypothesisError; };
struct ClosestPairViolated : HypothesisError { using HypothesisError::HypothesisError; };
struct EmptyOnBall : HypothesisError { using HypothesisError::HypothesisError; };
// Raised when a building direction cannot be written with an offset that is
// an exact rational multiple of pi (outside the desk-scale angle table).
struct UnrepresentableDirection : HypothesisError { using HypothesisError::HypothesisError; };

// Resource guards.
struct ClosureCapExceeded : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };

// Tripwires: statements the underlying theorems make impossible.  Firing one
// means a bug, not bad input (CLI exit code 3).
struct Contradiction : Error { using Error::Error; };
struct DichotomyViolated : Contradiction { using Contradiction::Contradiction; };
struct ContradictionDetected : Contradiction { using Contradiction::Contradiction; };

}  // namespace forge
