#pragma once

#include <stdexcept>
#include <string>

namespace pricekit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Observable or population living on the wrong type set, or incompatible shapes.
class MismatchError : public Error {
public:
    using Error::Error;
};

// Input violates a structural invariant (negative weight, empty population, bad partition).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// The quantity is undefined for this input (zero mass, degenerate moments, out-of-range order).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace pricekit
