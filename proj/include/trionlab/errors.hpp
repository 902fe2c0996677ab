#pragma once

#include <stdexcept>
#include <string>

namespace trionlab {

/// Invalid physical input (metallic species, negative radius, undefined mass fraction, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double worst_estimate)
        : std::runtime_error(what), worst_estimate_(worst_estimate) {}

    double worst_estimate() const noexcept { return worst_estimate_; }

private:
    double worst_estimate_;
};

/// Numerical procedure that could not produce a result (empty retained subspace, failed bracket).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace trionlab
