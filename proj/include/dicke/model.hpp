#pragma once

#include <complex>
#include <vector>

namespace dicke {

using Complex = std::complex<double>;

/// Physical constants of the Dicke Hamiltonian H = Delta Jz + lambda (a^+ + a) Jx + Omega a^+ a.
///
/// delta, omega > 0 are the spin and oscillator energies, lambda >= 0 the
/// coupling, j > 0 the spin length. The classical equations depend on the
/// parameters only through the dimensionless coupling kappa = 2 j lambda^2 / (delta omega).
struct ModelParams {
    double delta = 1.0;
    double omega = 1.0;
    double lambda = 0.0;
    double j = 0.5;

    /// Throws std::invalid_argument unless delta, omega, j > 0 and lambda >= 0.
    void validate() const;

    double kappa() const { return 2.0 * j * lambda * lambda / (delta * omega); }

    /// Parameters with the coupling chosen so that kappa(j, lambda) = kappa.
    static ModelParams from_kappa(double j, double kappa, double omega = 1.0, double delta = 1.0);
};

/// Classical phase-space point: planar spin coordinate z (stereographic image
/// of the Bloch sphere) and scaled boson amplitude alpha_bar = (Omega/j lambda) <a>.
/// Q = Re alpha_bar and P = Im alpha_bar are the oscillator position/momentum.
struct ClassicalState {
    Complex z{0.0, 0.0};
    Complex alpha_bar{0.0, 0.0};
};

/// Normalized spin expectation values (units of j); jx^2 + jy^2 + jz^2 = 1.
struct SpinTriple {
    double jx = 0.0;
    double jy = 0.0;
    double jz = -1.0;
};

/// z = e^{-i phi} tan(theta/2). Requires 0 <= theta < pi; theta = pi is the
/// south-pole singularity of the chart and throws std::domain_error.
Complex spin_to_planar(double theta, double phi);

/// Inverse chart: jx = 2 Re z/(1+|z|^2), jy = -2 Im z/(1+|z|^2), jz = (|z|^2-1)/(1+|z|^2).
SpinTriple planar_to_spin(Complex z);

/// z from a normalized spin triple, z = (jx - i jy)/(1 - jz). Requires jz < 1.
Complex planar_from_triple(const SpinTriple& s);

/// Dimensionless energy E/(j Delta) of a classical state.
double classical_energy(const ClassicalState& state, double kappa);

/// Parity image (-z, -alpha_bar); an involution that commutes with the flow.
ClassicalState parity(const ClassicalState& state);

struct StationaryState {
    ClassicalState state;
    bool stable = true;
};

/// Stationary solutions of the semiclassical flow.
/// kappa <= 1: the single solution z = alpha_bar = 0 (stable).
/// kappa  > 1: the two parity-related displaced solutions
///   z_pm = +-sqrt((kappa-1)/(kappa+1)), alpha_bar_pm = -+sqrt(kappa^2-1)/kappa (stable),
/// plus the now unstable trivial solution, returned last and flagged.
std::vector<StationaryState> stationary_solutions(double kappa);

} // namespace dicke
