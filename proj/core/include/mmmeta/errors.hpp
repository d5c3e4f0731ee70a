#pragma once

#include <stdexcept>
#include <string>

namespace mmmeta {

/// A series or transformation did not settle within its term budget.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the error it did reach.
struct QuadratureFailure : std::runtime_error {
    QuadratureFailure(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error " + std::to_string(achieved) + ")"),
          achieved_error(achieved) {}
    double achieved_error;
};

/// Characteristic-function inversion could not reach its tolerance.
struct IntegrationFailure : std::runtime_error {
    IntegrationFailure(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error " + std::to_string(achieved) + ")"),
          achieved_error(achieved) {}
    double achieved_error;
};

/// Argument outside the support of a density.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A closed form was requested for parameters it does not cover.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace mmmeta
