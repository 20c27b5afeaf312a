#pragma once

#include <stdexcept>
#include <string>

namespace mandeldecor {

// Numeric failure that is not a caller mistake (Newton stalled, branch lost...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by phi_M when c sits in M or too close to it for reliable branch tracking.
class PotentialTooSmall : public NumericalError {
public:
    explicit PotentialTooSmall(const std::string& what) : NumericalError(what) {}
};

}  // namespace mandeldecor
