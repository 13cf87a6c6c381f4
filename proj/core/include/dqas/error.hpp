#pragma once

#include <stdexcept>
#include <string>

namespace dqas {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: topology files, configs, Hamiltonian files.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A precondition on a runtime operation was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Circuit generation could not make progress.
class GenerationError : public Error {
public:
    using Error::Error;
};

}  // namespace dqas
