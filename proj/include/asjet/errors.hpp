#pragma once

#include <stdexcept>

namespace asjet {

// Error taxonomy shared by every module.  The CLI maps these to exit codes:
// ParseError -> 2, PrecisionError -> 3, DomainError -> 4.

// Malformed input text (cover files, jets, serialized values).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A needed coefficient is not certified by the stored precision.
// Computations fail loudly instead of treating unknown coefficients as zero.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntactically valid but mathematically inadmissible request
// (division by zero, mixed fields, short jets, enumeration cap exceeded...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken internal invariant; always a bug.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace asjet
