#pragma once

#include <array>
#include <utility>

namespace dicke {

/// Parameters of the 4x4 linearized equation-of-motion matrix around the
/// stationary state (rows: Re d_alpha, i Im d_alpha, Re dz, i Im dz*):
///   [ 0  g1  0  0 ; g1 0 g2 0 ; 0 0 0 g4 ; g3 0 g4 0 ]
struct GLinMatrix {
    double g1 = 0.0, g2 = 0.0, g3 = 0.0, g4 = 0.0;
};

/// Collective mode frequencies and response weights around the stationary state.
struct ModeResult {
    double omega_minus = 0.0;
    double omega_plus = 0.0;
    double w_minus = 0.0;
    double w_plus = 0.0;
    double beta = 0.0; // radians; in [0, pi/2] for Omega >= Delta, (pi/2, pi] otherwise
};

/// Linearization parameters; branch selected by kappa <> 1 (both branches
/// coincide at kappa = 1).
GLinMatrix glin_matrix(double kappa, double omega, double delta);

/// (omega_minus, omega_plus). omega_minus(kappa=1) = 0 exactly: the smaller
/// squared frequency is evaluated cancellation-free as det/omega_plus^2 with
/// det proportional to (1-kappa) below and (kappa^2-1) above the transition.
std::pair<double, double> mode_frequencies(double kappa, double omega, double delta);

/// Weights w_- = cos^2 beta, w_+ = sin^2 beta of the two response peaks, with
/// beta = atan2(2 sqrt(g1 g2 g3 g4), g1^2 - g4^2)/2, which selects the branch
/// where the spin-like mode carries all weight as kappa -> 0.
ModeResult mode_weights(double kappa, double omega, double delta);

/// Linear response to a small spin rotation: delta Jx(t)/delta Jx(0)
/// = w_- cos(omega_- t) + w_+ cos(omega_+ t).
double linear_response_jx(double t, double kappa, double omega, double delta);

struct SpectralPeak {
    double omega = 0.0;
    double weight = 0.0;
};

/// The four delta peaks {(-omega_+, pi w_+), (-omega_-, pi w_-),
/// (omega_-, pi w_-), (omega_+, pi w_+)} of the response Fourier transform;
/// total weight 2 pi.
std::array<SpectralPeak, 4> response_spectrum(double kappa, double omega, double delta);

} // namespace dicke
