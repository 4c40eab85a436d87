#pragma once

#include "dicke/chebyshev.hpp"
#include "dicke/quantum.hpp"

#include <vector>

namespace dicke {

struct GridSpec {
    int n_theta = 181; // uniform, inclusive [0, pi]
    int n_phi = 360;   // uniform, [0, 2 pi)
};

/// Sampled phase-space density over a (theta, phi) mesh, row-major
/// values[i_theta * n_phi + i_phi]. Masked nodes (e.g. the classically
/// forbidden region of a Poincare Husimi) hold NaN; unmasked values lie in [0, 1].
struct HusimiGrid {
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<double> values;

    int n_theta() const { return static_cast<int>(theta.size()); }
    int n_phi() const { return static_cast<int>(phi.size()); }
    double value(int it, int ip) const { return values[static_cast<std::size_t>(it) * phi.size() + ip]; }
};

/// Q(theta, phi) = |<theta,phi|psi>|^2: spin-coherent overlap per boson level,
/// summed in quadrature. Peak value <= 1; (2j+1)/(4pi) int Q sin(theta) = 1.
HusimiGrid spin_husimi(const StateVector& psi, const GridSpec& grid);

/// Time average (1/2T) int_{-T}^{T} Q(theta,phi;t) dt evaluated through the
/// Chebyshev coefficient matrix C: the quadratic form is diagonalized once and
/// the filtered states sum like weighted snapshots. order < 0 selects the
/// truncation automatically; an explicitly insufficient order throws.
HusimiGrid time_averaged_husimi(const SparseOperator& H, const SpectralBounds& bounds, const StateVector& psi0,
                                double t_half_window, const GridSpec& grid, int order = -1);

/// |<alpha_bar; theta,phi | psi>|^2 with the full product coherent state on the
/// classical section: Q = Re alpha_bar = 0 and Im alpha = sqrt((j Delta/Omega)(E - jz)),
/// jz = -cos(theta). Nodes with E < jz are classically forbidden and masked.
HusimiGrid poincare_husimi(const StateVector& psi, double energy, const ModelParams& params, const GridSpec& grid);

/// Smallest eigenvalue of the 3x3 spin covariance matrix
/// Delta_{k;l} = (1/2)<Jk Jl + Jl Jk> - <Jk><Jl>: the variance of the rotated
/// spin operator minimized over all directions. Zero for spin coherent states.
double spin_variance(const StateVector& psi);
double spin_variance(const StateVector& psi, const SpinOps& ops);

/// Square raster of the theta <= pi/2 cap: theta runs linearly from 0 at the
/// center to pi/2 on the outer circle, phi counterclockwise from the top.
/// Pixels outside the disc are NaN; sampling is bilinear.
struct DiscRaster {
    int size = 0;
    std::vector<double> pixels; // row-major size x size
};

DiscRaster husimi_disc_projection(const HusimiGrid& grid, int size = 201);

/// Boson coherent amplitudes <n|alpha>, n = 0..n_max-1 (log-space evaluation).
std::vector<Complex> boson_coherent_amplitudes(Complex alpha, int n_max);

} // namespace dicke
