#include "dicke/model.hpp"

#include <cmath>
#include <stdexcept>

namespace dicke {

void ModelParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("ModelParams: delta must be > 0");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("ModelParams: omega must be > 0");
    if (!(j > 0.0) || !std::isfinite(j)) throw std::invalid_argument("ModelParams: j must be > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("ModelParams: lambda must be >= 0");
}

ModelParams ModelParams::from_kappa(double j, double kappa, double omega, double delta) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("from_kappa: kappa must be >= 0");
    ModelParams p;
    p.delta = delta;
    p.omega = omega;
    p.j = j;
    p.lambda = std::sqrt(kappa * delta * omega / (2.0 * j));
    p.validate();
    return p;
}

Complex spin_to_planar(double theta, double phi) {
    if (!(theta >= 0.0) || !(theta <= M_PI))
        throw std::domain_error("spin_to_planar: theta outside [0, pi]");
    if (theta == M_PI)
        throw std::domain_error("spin_to_planar: theta = pi is the chart singularity");
    return std::polar(std::tan(0.5 * theta), -phi);
}

SpinTriple planar_to_spin(Complex z) {
    const double n = 1.0 + std::norm(z);
    return SpinTriple{2.0 * z.real() / n, -2.0 * z.imag() / n, (std::norm(z) - 1.0) / n};
}

Complex planar_from_triple(const SpinTriple& s) {
    if (!(s.jz < 1.0)) throw std::domain_error("planar_from_triple: jz = 1 is the chart singularity");
    return Complex{s.jx, -s.jy} / (1.0 - s.jz);
}

double classical_energy(const ClassicalState& state, double kappa) {
    const double zz = std::norm(state.z);
    return (zz - 1.0) / (zz + 1.0)
           + 2.0 * kappa * state.z.real() * state.alpha_bar.real() / (1.0 + zz)
           + 0.5 * kappa * std::norm(state.alpha_bar);
}

ClassicalState parity(const ClassicalState& state) {
    return ClassicalState{-state.z, -state.alpha_bar};
}

std::vector<StationaryState> stationary_solutions(double kappa) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("stationary_solutions: kappa must be >= 0");
    std::vector<StationaryState> out;
    if (kappa <= 1.0) {
        out.push_back({ClassicalState{}, true});
        return out;
    }
    const double z = std::sqrt((kappa - 1.0) / (kappa + 1.0));
    const double ab = std::sqrt(kappa * kappa - 1.0) / kappa;
    out.push_back({ClassicalState{Complex{z, 0.0}, Complex{-ab, 0.0}}, true});
    out.push_back({ClassicalState{Complex{-z, 0.0}, Complex{ab, 0.0}}, true});
    out.push_back({ClassicalState{}, false});
    return out;
}

} // namespace dicke
