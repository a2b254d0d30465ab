#pragma once

#include <stdexcept>
#include <string>

namespace logschroed {

/// Argument outside the domain of a formula (r <= 0, alpha <= 1 - N, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Numerical failure inside a solver; the message carries the last state.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure of the near-origin Picard startup quadrature.
class StartupError : public SolverError {
public:
    StartupError(const std::string& what, double lo, double hi)
        : SolverError(what), lo_(lo), hi_(hi) {}
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_, hi_;
};

/// Configuration file problems; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace logschroed
