#pragma once

#include "dicke/model.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace dicke {

/// Real matrix indexed [row][col] in the variable ordering (Q, P, Re z, Im z),
/// Q = Re alpha_bar, P = Im alpha_bar.
using Jacobian4 = std::array<std::array<double, 4>, 4>;

/// Right-hand side of the semiclassical equations of motion,
///   i d/dt alpha_bar = Omega (alpha_bar + 2 Re z/(1+|z|^2)),
///   i d/dt z         = Delta (z + (kappa/2)(1-z^2) Re alpha_bar),
/// returned as (dQ/dt, dP/dt, dRe z/dt, dIm z/dt).
std::array<double, 4> eom_rhs(const ClassicalState& state, double kappa, double omega, double delta);

/// Analytic Jacobian of eom_rhs in the same ordering. Note the flow is not
/// volume preserving in the stereographic chart: trace J = -2 kappa delta Im(z) Re(alpha_bar).
Jacobian4 eom_jacobian(const ClassicalState& state, double kappa, double omega, double delta);

struct Trajectory {
    std::vector<double> times;           // units of 1/Delta
    std::vector<ClassicalState> states;
    std::vector<double> energies;        // E/(j Delta)
};

/// Adaptive RK5(4) integration sampled at n_samples uniform times (dense output).
/// tol must lie in [1e-13, 1e-4]. Throws IntegrationError on step underflow.
Trajectory integrate(const ClassicalState& state0, double kappa, double omega, double delta,
                     double t_end, double tol, std::size_t n_samples = 1001);

/// Classical state on the Poincare section Q = 0: the spin point is placed on
/// the lower hemisphere jz = -sqrt(1-jx^2-jy^2) and P = +sqrt((2/kappa)(E - jz)).
/// Throws EnergyUnreachableError if E < jz, std::invalid_argument for kappa = 0
/// or jx^2 + jy^2 > 1.
ClassicalState initial_state_from_section(double energy, double jx, double jy, double kappa);

struct PoincareSection {
    struct Point {
        double jx = 0.0, jy = 0.0;
        int direction = 0; // sign of dQ/dt at the crossing
    };
    std::vector<Point> points;
    double energy = 0.0;
    double kappa = 0.0;
};

/// Record Jx, Jy at the crossings of Q = Re alpha_bar = 0, both directions.
/// Crossings are located by sign change and polished on the dense output to
/// |Q| < 1e-12. Each seed is integrated until max_crossings or t_max.
PoincareSection poincare_section(double energy, double kappa, double omega, double delta,
                                 const std::vector<ClassicalState>& seeds,
                                 std::size_t max_crossings, double t_max, double tol = 1e-10);

struct LyapunovResult {
    std::vector<double> times;
    std::vector<double> lambda1; // running finite-time exponents, 1/time units
    std::vector<double> lambda2;
    double renorm_interval = 0.0;
};

/// Benettin tangent-space method: two orthonormal tangent vectors co-evolved
/// with the orbit under eom_jacobian, Gram-Schmidt renormalized every
/// renorm_interval. The flow's exponents come in +- pairs; the two reported
/// running exponents are the non-negative members, ordered lambda1 >= lambda2.
LyapunovResult lyapunov_spectrum(const ClassicalState& state0, double kappa, double omega, double delta,
                                 double t_end, double renorm_interval, double tol = 1e-10);

} // namespace dicke
