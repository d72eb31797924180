#pragma once

#include <stdexcept>
#include <string>

namespace rolin {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, nonpositive widths, alpha outside (0,1).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Too few samples for the requested estimator.
class SampleSizeError : public Error {
public:
    using Error::Error;
};

// The sample carries no scale or dependence information (e.g. constant data).
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

// Malformed input file. Carries the 1-based line number when known.
class DataError : public Error {
public:
    DataError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Quadrature did not converge, or a fitted distribution has invalid moments.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace rolin
