#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nli {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural or physical input invariants do not hold.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);

    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// A closed-form or oracle evaluation could not be carried out.
class ComputationError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature stopped before reaching its tolerance.
class QuadratureError : public ComputationError {
public:
    QuadratureError(const std::string& what, double value, double error_estimate)
        : ComputationError(what), value_(value), error_estimate_(error_estimate) {}

    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

private:
    double value_;
    double error_estimate_;
};

/// Link-description document is malformed. Line and column are 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line = 0, int column = 0);

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace nli
