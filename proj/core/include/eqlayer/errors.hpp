#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eqlayer {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. alpha not in (0,1]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition (nonzero trace, bad support, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two objects that must agree structurally do not (grid mismatch, sizes).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// The boundary configuration cannot produce a square, well-posed system.
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Sparse factorization failed or produced an unusable residual.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Iterative solve stopped before reaching its tolerance.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// Malformed configuration file; carries the 1-based line number (0 if not line specific).
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace eqlayer
