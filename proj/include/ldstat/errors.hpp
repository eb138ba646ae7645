#pragma once

#include <stdexcept>
#include <string>

namespace ldstat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions before reaching its tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

/// No sign change on the bracket handed to the root finder.
class BracketError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed its configured work budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// An estimator is undefined or failed on the given sample.
class EstimationError : public Error {
public:
    using Error::Error;
};

}  // namespace ldstat

namespace ldstat {

/// Malformed input data; `line()` is 1-based, 0 when not line-specific.
class InputError : public Error {
public:
    InputError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace ldstat
