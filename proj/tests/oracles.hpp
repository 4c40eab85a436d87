#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include "dicke/model.hpp"
#include "dicke/quantum.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using dicke::Complex;

inline Eigen::MatrixXcd to_dense(const dicke::SparseOperator& op) {
    const auto n = static_cast<Eigen::Index>(op.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (std::size_t p = op.row_ptr()[r]; p < op.row_ptr()[r + 1]; ++p)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(op.cols()[p])) += op.values()[p];
    return m;
}

struct DenseEig {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

inline DenseEig dense_eig(const dicke::SparseOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense(op));
    return {es.eigenvalues(), es.eigenvectors()};
}

/// exp(-i H t) psi by dense diagonalization.
inline std::vector<Complex> dense_propagate(const DenseEig& eig, const std::vector<Complex>& psi, double t) {
    const auto n = eig.values.size();
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(psi.data(), n);
    Eigen::VectorXcd c = eig.vectors.adjoint() * v;
    for (Eigen::Index i = 0; i < n; ++i) c(i) *= std::exp(Complex{0.0, -eig.values(i) * t});
    Eigen::VectorXcd out = eig.vectors * c;
    return {out.data(), out.data() + n};
}

/// Random classical states with bounded |z|, |alpha_bar|.
inline dicke::ClassicalState random_state(std::mt19937& rng, double scale = 1.5) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return dicke::ClassicalState{Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}};
}

/// Closed-form kappa = 0 solution: free spin precession z(t) = z0 e^{-i Delta t}
/// and the driven oscillator alpha(t) (valid for Omega != Delta).
struct FreeSolution {
    Complex z0, a0;
    double omega, delta;

    Complex z(double t) const { return z0 * std::exp(Complex{0.0, -delta * t}); }

    Complex alpha_bar(double t) const {
        const double f = 1.0 / (1.0 + std::norm(z0));
        const Complex em_om = std::exp(Complex{0.0, -omega * t});
        // i a' = Om a + Om f (z0 e^{-i D t} + conj(z0) e^{+i D t})
        auto drive = [&](Complex amp, double w) {
            // particular + homogeneous part for forcing amp e^{-i w t}added to e^{-i Om t} evolution
            return -amp * omega * f / (omega - w) * (std::exp(Complex{0.0, -w * t}) - em_om);
        };
        return a0 * em_om + drive(z0, delta) + drive(std::conj(z0), -delta);
    }
};

} // namespace oracle
