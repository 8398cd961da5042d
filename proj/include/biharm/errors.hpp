#pragma once

#include <stdexcept>
#include <string>

namespace biharm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// A root refinement or fixed-point loop exhausted its iteration budget.
struct ConvergenceError : Error {
    using Error::Error;
};

// A quadrature could not certify the requested tolerance.
struct AccuracyError : Error {
    using Error::Error;
};

// The first lobe integral failed to converge; the weight violates the
// small-s integrability condition.
struct NonIntegrableWeightError : Error {
    using Error::Error;
};

// A certificate hypothesis failed at a concrete sample.
struct HypothesisViolation : Error {
    using Error::Error;
};

// A lower envelope constant was requested for a sign-changing solution.
struct PositivityRequired : Error {
    using Error::Error;
};

// Picard output norm exceeded the admissible ball by a wide margin.
struct NormOverflow : Error {
    using Error::Error;
};

}  // namespace biharm
