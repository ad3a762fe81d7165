#pragma once
#include <stdexcept>
#include <string>

namespace fmlab {

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical target could not be met; carries the best value reached.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, double best_value, double est_error)
        : std::runtime_error(what), best_value_(best_value), est_error_(est_error) {}
    double best_value() const noexcept { return best_value_; }
    double est_error() const noexcept { return est_error_; }

private:
    double best_value_;
    double est_error_;
};

/// Malformed configuration file or key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fmlab
