#pragma once

#include "dicke/model.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dicke {

/// Truncated spin (x) boson product basis. Boson-major ordering
/// idx = n (2j+1) + (m+j): spin couplings act inside contiguous blocks.
/// Quantum modules require 2j to be a non-negative integer (the classical
/// modules accept any real j > 0; the spin-length conventions j^2 vs j(j+1)
/// agree only as j -> infinity and are intentionally not reconciled).
struct BasisSpec {
    double j = 0.5;
    int n_max = 1;

    void validate(std::size_t max_dim = 8'000'000) const;
    int spin_dim() const { return static_cast<int>(2.0 * j + 1.5); }
    std::size_t dim() const { return static_cast<std::size_t>(n_max) * static_cast<std::size_t>(spin_dim()); }
    std::size_t index(int n, int k) const { // k = m + j in 0..2j
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(spin_dim()) + static_cast<std::size_t>(k);
    }
};

/// Hermitian operator on the truncated basis in compressed sparse row form.
class SparseOperator {
public:
    struct Triplet {
        std::size_t row, col;
        Complex value;
    };

    SparseOperator() = default;
    static SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> triplets);

    std::size_t dim() const { return dim_; }
    std::size_t nnz() const { return cols_.size(); }

    void apply(std::span<const Complex> x, std::span<Complex> y) const;
    std::vector<Complex> apply(const std::vector<Complex>& x) const;

    /// max entrywise |A - A^dagger|.
    double hermiticity_defect() const;

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& cols() const { return cols_; }
    const std::vector<Complex>& values() const { return vals_; }

private:
    std::size_t dim_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<Complex> vals_;
};

/// Complex amplitudes over the truncated basis; unit norm after construction
/// and propagation. Binary serialization lives in io.hpp.
struct StateVector {
    BasisSpec basis;
    std::vector<Complex> amp;

    double norm() const;
    void normalize();
};

Complex inner(const StateVector& a, const StateVector& b);
Complex expectation(const SparseOperator& A, const StateVector& psi);

/// H = Delta Jz + lambda (a^+ + a) Jx + Omega a^+ a. At most 5 nonzeros per row.
SparseOperator build_hamiltonian(const ModelParams& params, const BasisSpec& basis);

struct SpinOps {
    SparseOperator jx, jy, jz;
};
struct BosonOps {
    SparseOperator a, adag, n;
};

SpinOps build_spin_ops(const BasisSpec& basis);
BosonOps build_boson_ops(const BasisSpec& basis);

/// Parity Pi = exp(i pi (a^+ a + Jz + j)): diagonal entries (-1)^(n + m + j).
SparseOperator parity_operator(const BasisSpec& basis);

/// Spin coherent amplitudes <j,m | theta,phi> = sqrt(C(2j, j+m))
/// sin^(j+m)(theta/2) cos^(j-m)(theta/2) e^{-i(j+m)phi}, k = j+m = 0..2j.
/// Regular on the whole sphere including theta = pi.
std::vector<Complex> spin_coherent_amplitudes(double j, double theta, double phi);

/// |alpha> (x) |z>: boson amplitudes e^{-|a|^2/2} a^n/sqrt(n!) and spin
/// amplitudes sqrt(C(2j,j+m)) z^{j+m}/(1+|z|^2)^j, evaluated in log space and
/// renormalized after truncation. Throws CutoffError (with a sufficient n_max
/// estimate) if the boson weight beyond the cutoff exceeds 1e-8.
StateVector coherent_product_state(Complex alpha, Complex z, const BasisSpec& basis);

struct GroundState {
    double energy = 0.0;
    StateVector state;
};

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization and a
/// deterministic all-ones start vector; residual ||H psi - E0 psi|| < tol.
GroundState ground_state(const SparseOperator& H, const BasisSpec& basis, double tol = 1e-10);

struct SpectralBounds {
    double e_min = 0.0;
    double e_max = 0.0;
    double center() const { return 0.5 * (e_max + e_min); }
    double half_width() const { return 0.5 * (e_max - e_min); }
};

/// Extremal Lanczos estimates widened by a 1% safety margin; every Chebyshev
/// recurrence uses the affine map derived from these.
SpectralBounds spectral_bounds(const SparseOperator& H, double margin = 0.01);

struct EigenpairsOptions {
    std::size_t dense_threshold = 10'000; // dense solve at or below, filtered iteration above
    double tol = 1e-8;
    int max_cycles = 60;
    int filter_degree = 0; // 0 = automatic
};

struct Eigenpair {
    double energy = 0.0;
    StateVector state;
};

/// `count` eigenpairs nearest e_target, sorted by energy; residuals < opts.tol.
std::vector<Eigenpair> eigenpairs_near(const SparseOperator& H, const BasisSpec& basis, double e_target,
                                       std::size_t count, const EigenpairsOptions& opts = {});

/// Indices of `states` in descending order of |<state|psi0>|; stable for ties
/// (callers pass energy-sorted states, so ties keep energy order).
std::vector<std::size_t> overlap_rank(const std::vector<StateVector>& states, const StateVector& psi0);

/// Boson cutoff auto-selection: start from max(16, 4 j kappa Delta/Omega) and
/// double until the ground state tail and the coherent tail for the states of
/// interest (largest |alpha|^2 passed in) are negligible.
int choose_n_max(const ModelParams& params, double alpha_abs2 = 0.0);

} // namespace dicke
