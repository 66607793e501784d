#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace crofton {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a type invariant (bad piece, bad domain, bad scene field).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the parameter domain of an operation.
class ParameterDomainError : public Error {
public:
    using Error::Error;
};

/// Pieces of a set that are not contained in the closed domain.
class ContainmentError : public ValidationError {
public:
    ContainmentError(std::string message, std::vector<std::size_t> offending)
        : ValidationError(std::move(message)), offending_(std::move(offending)) {}

    const std::vector<std::size_t>& offending_pieces() const noexcept { return offending_; }

private:
    std::vector<std::size_t> offending_;
};

/// The kernel was evaluated on the diagonal x == y.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// A requested length is outside the range where the extremal construction applies.
class RegimeError : public Error {
public:
    RegimeError(std::string message, double below, double above)
        : Error(std::move(message)), below_(below), above_(above) {}

    /// Nearest admissible length not exceeding the request.
    double nearest_below() const noexcept { return below_; }
    /// Nearest admissible length above the request.
    double nearest_above() const noexcept { return above_; }

private:
    double below_;
    double above_;
};

class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace crofton
