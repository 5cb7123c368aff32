#pragma once

#include <stdexcept>
#include <string>

namespace pdbuck {

// Base class for all pdbuck errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A rational function was evaluated exactly on a pole.
struct PoleHit : Error {
    using Error::Error;
};

// Operation requires a different control mode than the config carries.
struct ModeMismatch : Error {
    using Error::Error;
};

// Argument outside the operation's documented domain (e.g. d outside the
// clipped switching-phase range).
struct DomainError : Error {
    using Error::Error;
};

// Period-two relation evaluated at delta = 0 (use the critical curve instead).
struct DegenerateDelta : Error {
    using Error::Error;
};

// Closed-form formula singular at the supplied parameters (e.g. Rc = 0 in the
// current-mode approximation).
struct SingularParameter : Error {
    using Error::Error;
};

// Algebraic relation has a vanishing denominator for these inputs.
struct DegenerateDenominator : Error {
    using Error::Error;
};

// Simulation state stopped being finite.
struct NonFinite : Error {
    using Error::Error;
};

// Too few samples for the requested classification.
struct InsufficientSamples : Error {
    using Error::Error;
};

// Configuration violates an invariant or a precondition of the call.
struct InvalidConfig : Error {
    using Error::Error;
};

} // namespace pdbuck
