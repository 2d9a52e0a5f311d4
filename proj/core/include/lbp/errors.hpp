#pragma once

#include <stdexcept>
#include <string>

namespace lbp {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

/// A computation produced a non-finite value or left the representable range.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& what) : error(what) {}
};

/// A convergence/divergence decision fell inside the indeterminate band.
/// Carries the fitted exponent so callers can report evidence.
class undecidable_error : public error {
public:
    undecidable_error(const std::string& what, double exponent)
        : error(what), exponent_(exponent) {}
    double exponent() const noexcept { return exponent_; }

private:
    double exponent_;
};

/// An iterative solver failed to meet its contract (restart hints in message).
class solver_error : public error {
public:
    explicit solver_error(const std::string& what) : error(what) {}
};

/// An improper integral could not be truncated within tolerance.
/// Carries the partial sum accumulated before giving up.
class truncation_error : public error {
public:
    truncation_error(const std::string& what, double partial_sum)
        : error(what), partial_(partial_sum) {}
    double partial_sum() const noexcept { return partial_; }

private:
    double partial_;
};

/// Monte Carlo estimate is too censored to be trusted.
class unreliable_estimate_error : public error {
public:
    explicit unreliable_estimate_error(const std::string& what) : error(what) {}
};

} // namespace lbp
