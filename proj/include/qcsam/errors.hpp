#pragma once

#include <stdexcept>
#include <string>

namespace qcsam {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Register size / qubit-count outside the supported dense-simulation range.
struct SizeError : Error {
    using Error::Error;
};

// Qubit index out of range for a state or gate.
struct IndexError : Error {
    using Error::Error;
};

// Dimension / width mismatch between operands.
struct ShapeError : Error {
    using Error::Error;
};

// Post-selected measurement branch has (numerically) zero probability.
struct PostSelectionError : Error {
    using Error::Error;
};

// Parameter / data vector length does not match a circuit's slot families.
struct BindingError : Error {
    using Error::Error;
};

// All coefficients (or all weights) are zero.
struct DegenerateError : Error {
    using Error::Error;
};

// A complex linear combination cancelled to numerical zero.
struct CancellationError : Error {
    using Error::Error;
};

// A readout or reconstruction is mathematically impossible for valid inputs,
// e.g. a recovered inner product with magnitude > 1.
struct InconsistencyError : Error {
    using Error::Error;
};

// Input values outside the documented domain (e.g. features not in [0, pi]).
struct DomainError : Error {
    using Error::Error;
};

// Invalid experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Dataset-level problems (missing files aside): class counts, rank, ...
struct DataError : Error {
    using Error::Error;
};

// Malformed IDX payload.
struct FormatError : Error {
    using Error::Error;
};

// Operation on an object in the wrong state (e.g. unfitted PCA).
struct StateError : Error {
    using Error::Error;
};

} // namespace qcsam
