#ifndef RFCW_ERRORS_HPP
#define RFCW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rfcw {

// Bad caller input: sizes, ranges, invalid configuration.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Request exceeds a hard implementation cutoff (e.g. enumeration size).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iteration failed to reach its tolerance within budget.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A maximum could not be classified within the supported degeneracy range.
struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input is outside the region where the requested quantity is defined.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rfcw

#endif
