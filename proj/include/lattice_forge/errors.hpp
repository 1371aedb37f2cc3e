#pragma once

#include <stdexcept>
#include <string>

namespace lattice_forge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class DegenerateBasisError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed a configured resource cap (point counts, nodes).
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A series, truncation or iteration failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A radial measure has an infinite moment where a finite one is required.
class MomentError : public Error {
public:
    using Error::Error;
};

/// The requested potential/measure pairing has no supported evaluation route.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Malformed potential/measure spec strings or input files.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::string token)
        : Error(message + " (offending token: '" + token + "')"), token_(std::move(token)) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

}  // namespace lattice_forge
