#pragma once

#include <stdexcept>
#include <string>

namespace optsamp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid argument or configuration value.
class ParameterError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "parameter"; }
};

/// Argument outside the mathematical domain of a function (e.g. t < 0).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Caller broke a documented precondition on an object's state.
class ContractError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "contract"; }
};

/// Division by a vanishing density.
class SingularityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "singularity"; }
};

/// Exponential overflow while iterating an already-divergent sequence.
class OverflowError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "overflow"; }
};

/// Work bound exceeded (too many instants or summation terms).
class ResourceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resource"; }
};

}  // namespace optsamp
