#include "dicke/modes.hpp"

#include <cmath>
#include <stdexcept>

namespace dicke {

namespace {

void check_kappa(double kappa) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
}

} // namespace

GLinMatrix glin_matrix(double kappa, double omega, double delta) {
    check_kappa(kappa);
    if (kappa <= 1.0)
        return GLinMatrix{omega, 2.0 * omega, 0.5 * delta * kappa, delta};
    return GLinMatrix{omega, omega * (kappa + 1.0) / (kappa * kappa),
                      delta * kappa / (kappa + 1.0), delta * kappa};
}

std::pair<double, double> mode_frequencies(double kappa, double omega, double delta) {
    check_kappa(kappa);
    const double o2 = omega * omega, d2 = delta * delta;
    double sum2, disc, det; // omega_+^2 + omega_-^2, discriminant, omega_+^2 omega_-^2
    if (kappa <= 1.0) {
        sum2 = o2 + d2;
        disc = 0.25 * (o2 - d2) * (o2 - d2) + o2 * d2 * kappa;
        det = o2 * d2 * (1.0 - kappa);
    } else {
        const double dk2 = d2 * kappa * kappa;
        sum2 = o2 + dk2;
        disc = 0.25 * (o2 - dk2) * (o2 - dk2) + o2 * d2;
        det = o2 * d2 * (kappa * kappa - 1.0);
    }
    const double wp2 = 0.5 * sum2 + std::sqrt(disc);
    const double wm2 = det / wp2; // avoids the cancellation at kappa -> 1
    return {std::sqrt(wm2), std::sqrt(wp2)};
}

ModeResult mode_weights(double kappa, double omega, double delta) {
    check_kappa(kappa);
    const GLinMatrix g = glin_matrix(kappa, omega, delta);
    double beta;
    if (omega == delta && kappa < 1.0) {
        beta = 0.25 * M_PI; // resonance limit; atan2(0,0) at kappa = 0 would misassign
    } else {
        beta = 0.5 * std::atan2(2.0 * std::sqrt(g.g1 * g.g2 * g.g3 * g.g4), g.g1 * g.g1 - g.g4 * g.g4);
    }
    const double c = std::cos(beta), s = std::sin(beta);
    ModeResult res;
    const auto [wm, wp] = mode_frequencies(kappa, omega, delta);
    res.omega_minus = wm;
    res.omega_plus = wp;
    res.w_minus = c * c;
    res.w_plus = s * s;
    res.beta = (omega < delta) ? M_PI - beta : beta;
    return res;
}

double linear_response_jx(double t, double kappa, double omega, double delta) {
    const ModeResult m = mode_weights(kappa, omega, delta);
    return m.w_minus * std::cos(m.omega_minus * t) + m.w_plus * std::cos(m.omega_plus * t);
}

std::array<SpectralPeak, 4> response_spectrum(double kappa, double omega, double delta) {
    const ModeResult m = mode_weights(kappa, omega, delta);
    return {SpectralPeak{-m.omega_plus, M_PI * m.w_plus}, SpectralPeak{-m.omega_minus, M_PI * m.w_minus},
            SpectralPeak{m.omega_minus, M_PI * m.w_minus}, SpectralPeak{m.omega_plus, M_PI * m.w_plus}};
}

} // namespace dicke
