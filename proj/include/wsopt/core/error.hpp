#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wsopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed text input; carries the 1-based line and the offending field.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
          line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

class Unreachable : public Error {
public:
    using Error::Error;
};

class CycleError : public Error {
public:
    using Error::Error;
};

/// A stored model or artifact does not belong to the layout it is used with.
class HashMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when an iterative fit produces NaN/Inf; keeps the last finite parameters.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::vector<double> last_stable)
        : Error(what), last_stable_(std::move(last_stable)) {}

    const std::vector<double>& last_stable() const noexcept { return last_stable_; }

private:
    std::vector<double> last_stable_;
};

/// An evaluation budget was consumed.
class BudgetExhausted : public Error {
public:
    BudgetExhausted() : Error("objective evaluation budget exhausted") {}
    explicit BudgetExhausted(const std::string& what) : Error(what) {}
};

} // namespace wsopt
