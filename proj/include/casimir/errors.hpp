#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A caller-side precondition does not hold; the message names it.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Reflection denominator vanishes: zero scaled coupling with an infinite strength.
class DegenerateCouplingError : public Error {
public:
    using Error::Error;
};

/// Two separable clusters come closer than the smearing length.
class OverlapError : public Error {
public:
    using Error::Error;
};

/// Mode-count cutoff excludes every waveguide channel.
class EmptyChannelSetError : public Error {
public:
    using Error::Error;
};

/// Lattice Hamiltonian has a negative eigenvalue.
class IndefiniteMatrixError : public Error {
public:
    using Error::Error;
};

/// Integral diverges at the low-frequency endpoint.
class InfraredDivergenceError : public Error {
public:
    using Error::Error;
};

/// Iterative procedure stopped before reaching its tolerance.
/// Carries the last estimate so callers can flag partial results.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

} // namespace casimir
