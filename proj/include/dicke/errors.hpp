#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

/// Iterative solver or quadrature failed to reach its target accuracy.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_residual = 0.0)
        : std::runtime_error(what), best_residual_(best_residual) {}
    double best_residual() const { return best_residual_; }

private:
    double best_residual_;
};

/// Bosonic cutoff n_max too small for the requested state.
class CutoffError : public std::runtime_error {
public:
    CutoffError(const std::string& what, int suggested_n_max)
        : std::runtime_error(what), suggested_n_max_(suggested_n_max) {}
    int suggested_n_max() const { return suggested_n_max_; }

private:
    int suggested_n_max_;
};

/// ODE step size underflow; carries the last good time reached.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t_reached)
        : std::runtime_error(what), t_reached_(t_reached) {}
    double t_reached() const { return t_reached_; }

private:
    double t_reached_;
};

/// Requested energy is not reachable on the Poincare section.
class EnergyUnreachableError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace dicke
