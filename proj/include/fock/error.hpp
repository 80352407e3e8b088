#pragma once

#include <stdexcept>
#include <string>

namespace fock {

/// Base class for every exception raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions (non-positive radius, p <= 0, ...).
class InvalidArgument : public Error {
public:
    InvalidArgument(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An integral that cannot be truncated safely (no Gaussian decay and no compact support).
class NonIntegrable : public Error {
public:
    using Error::Error;
};

/// Exponent of a kernel evaluation exceeded the natural-log cap.
class Overflow : public Error {
public:
    using Error::Error;
};

} // namespace fock
