/**
 * @file error.hpp
 * @brief Exception types thrown by shadelab.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace shadelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad sizes, values out of range).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two inputs that must share dimensions do not.
class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// File could not be read, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

/// The iterative solver hit its iteration cap before reaching tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

}  // namespace shadelab
