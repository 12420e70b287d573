#pragma once

#include <stdexcept>
#include <string>

namespace nsa {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Two objects that must share a grid (or component count) do not.
class GridMismatch : public Error {
public:
    using Error::Error;
};

// A dense problem would exceed the configured site cap.
class SizeCapExceeded : public Error {
public:
    using Error::Error;
};

// Spectral parameter sits on (or numerically at) a lattice value of the symbol.
class ResolventError : public Error {
public:
    ResolventError(const std::string& what, long mode)
        : Error(what), mode_(mode) {}

    // Flat index of the offending lattice mode.
    long mode() const noexcept { return mode_; }

private:
    long mode_;
};

// LAPACK reported a failure.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace nsa
