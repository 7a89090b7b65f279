#pragma once

#include <stdexcept>
#include <string>

namespace pbqct {

// Requested Hilbert space or enumeration exceeds a configured cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mathematically invalid input (non-Hermitian matrix, negative spectrum, bad index).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller misuse: missing metadata, unknown tags, degenerate series.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace pbqct
