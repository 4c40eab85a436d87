#pragma once

#include "dicke/quantum.hpp"

#include <string>
#include <vector>

namespace dicke {

/// J_0(x) .. J_n_max(x) by Miller's downward recurrence.
std::vector<double> bessel_j_array(double x, int n_max);

/// Polynomial expansion of e^{-iHt} using the affine rescaling H~ = (H-b)/a
/// from spectral_bounds; coefficients c_n(t) = (2 - delta_n0)(-i)^n J_n(at)
/// times the center phase e^{-ibt}. Long times are split into steps with
/// a*t_step <= 200; the truncation order keeps the first omitted coefficient
/// below 1e-14. Norm drift beyond 1e-10 raises CutoffError (the basis cutoff
/// or the bounds are inadequate).
class ChebyshevPropagator {
public:
    ChebyshevPropagator(const SparseOperator& H, SpectralBounds bounds);

    StateVector propagate(const StateVector& psi0, double t) const;

    const SpectralBounds& bounds() const { return bounds_; }
    double scale() const { return a_; }
    double center() const { return b_; }

    /// y = (H - b)/a x
    void apply_scaled(std::span<const Complex> x, std::span<Complex> y) const;

private:
    const SparseOperator* h_;
    SpectralBounds bounds_;
    double a_, b_;
};

/// Truncation order for one step of duration tau (a*tau in scaled units):
/// smallest N with 2 |J_N(a tau)| < 1e-14.
int chebyshev_order(double a_tau);

enum class KpmKernel { jackson, lorentz };

struct Spectrum {
    std::vector<double> omega;   // strictly increasing grid, energy units
    std::vector<double> values;  // spectral density, 1/energy units
    std::string kernel;
    int moments = 0;
    double e0 = 0.0;             // ground state energy used for the shift
    SpectralBounds bounds;
};

struct OmegaGrid {
    double lo = 0.0, hi = 0.0;
    std::size_t n = 2048;
};

/// Commutator Green function <<A;B>>_omega of the ground state psi0:
///   2 pi i <psi0| A delta[w - (H-E0)] B |psi0> - 2 pi i <psi0| B delta[w + (H-E0)] A |psi0>,
/// both delta terms reconstructed from one sweep of cross moments
/// mu_n = <A psi0 | T_n(H~) | B psi0> with kernel damping. The output is real
/// (time-reversal symmetry); the residual imaginary part is discarded after
/// an internal consistency check. Requires moments >= 8 and a grid inside the
/// maximal transition-frequency range.
Spectrum kpm_green_function(const SparseOperator& H, const StateVector& psi0, const SparseOperator& A,
                            const SparseOperator& B, int moments, const OmegaGrid& grid,
                            KpmKernel kernel = KpmKernel::jackson, const SpectralBounds* bounds = nullptr);

/// Convolution with a normalized Gaussian of standard deviation `width`
/// (uniform grids only). Preserves the integral up to edge truncation.
Spectrum gaussian_smooth(const Spectrum& s, double width);

struct Peak {
    double position = 0.0;
    double weight = 0.0;
};

/// Local maxima above rel_threshold * max(values); the position is refined by
/// a local quadratic fit and the weight is the trapezoidal integral between
/// the flanking minima.
std::vector<Peak> peak_extract(const Spectrum& s, double rel_threshold = 1e-3);

/// Time-average matrix C_mn = (1/2T) int_{-T}^{T} c_m*(t) c_n(t) dt for the
/// propagation coefficients above; depends only on aT. Evaluated from the
/// double integral over sinc-weighted phase factors with a periodic
/// trapezoid rule; the quadrature size is doubled until C changes by < 1e-8
/// (an explicitly given quad_size that fails the doubling check throws
/// ConvergenceError). Hermitian and positive semidefinite.
struct TimeAvgMatrix {
    int order = 0;       // matrix is (order+1) x (order+1)
    double a_t = 0.0;
    int quad_size = 0;
    std::vector<Complex> c; // row-major

    Complex at(int m, int n) const { return c[static_cast<std::size_t>(m) * (order + 1) + n]; }
};

TimeAvgMatrix time_avg_coefficients(int order, double a_t, int quad_size = 0);

} // namespace dicke
