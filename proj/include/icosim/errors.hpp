#pragma once

#include <stdexcept>

namespace icosim {

// Error taxonomy shared across the library. The CLI maps these onto its
// documented exit codes.

// Invalid configuration: sizes, counts, hyperparameters, file contents.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed circuit/state combination: bad qubit indices, branch touching
// the order qubit, parameter-vector length mismatch.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the modelled physical domain (e.g. zero horizontal field).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace icosim
