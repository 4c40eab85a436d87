#pragma once

// Dormand-Prince 5(4) with dense output. Hand-rolled so the Poincare event
// refinement and the tangent-space Lyapunov runs can share one controllable
// integrator with a continuous extension.

#include "dicke/errors.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace dicke {

template <std::size_t N>
using OdeState = std::array<double, N>;

template <std::size_t N>
struct DenseSegment {
    double t0 = 0.0, h = 0.0;
    std::array<OdeState<N>, 5> cont{};

    /// Evaluate the 4th-order continuous extension at t in [t0, t0+h].
    OdeState<N> eval(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        OdeState<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = cont[0][i] + s * (cont[1][i] + s1 * (cont[2][i] + s * (cont[3][i] + s1 * cont[4][i])));
        return y;
    }
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h_init = 1e-3;
    double h_max = 0.0;          // 0 = no cap
    double* h_carry = nullptr;   // in/out: resume step size across calls
};

/// Integrate dy/dt = rhs(t, y) from (t0, y0) to t_end, calling
/// observe(t_prev, t_new, y_new, segment) after every accepted step.
/// Return true from observe to continue, false to stop early.
/// Throws IntegrationError on step-size underflow.
template <std::size_t N>
OdeState<N> dopri5(const std::function<void(double, const OdeState<N>&, OdeState<N>&)>& rhs,
                   OdeState<N> y, double t0, double t_end, const OdeOptions& opt,
                   const std::function<bool(double, double, const OdeState<N>&, const DenseSegment<N>&)>& observe = {}) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - bhat (error weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    // dense output weights (Hairer's contd5)
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    const double dir = (t_end >= t0) ? 1.0 : -1.0;
    double t = t0;
    double h0 = std::abs(opt.h_init);
    if (opt.h_carry && *opt.h_carry > 0.0) h0 = *opt.h_carry;
    double h = dir * h0;
    double h_suggest = h;
    const double hmax = opt.h_max > 0.0 ? opt.h_max : std::abs(t_end - t0);

    OdeState<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    rhs(t, y, k1);
    bool last_rejected = false;

    while (dir * (t_end - t) > 0.0) {
        if (std::abs(h) > hmax) h = dir * hmax;
        if (dir * (t + h - t_end) > 0.0) h = t_end - t;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationError("dopri5: step size underflow", t);

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(N));

        if (err <= 1.0) {
            DenseSegment<N> seg;
            seg.t0 = t;
            seg.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                seg.cont[0][i] = y[i];
                seg.cont[1][i] = ydiff;
                seg.cont[2][i] = bspl;
                seg.cont[3][i] = ydiff - h * k7[i] - bspl;
                seg.cont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            const double t_prev = t;
            t += h;
            y = ynew;
            k1 = k7; // FSAL
            double fac = 0.9 * std::pow(err > 1e-300 ? err : 1e-300, -0.2);
            fac = std::min(last_rejected ? 1.0 : 10.0, std::max(0.2, fac));
            h_suggest = h * fac;
            h = h_suggest;
            last_rejected = false;
            if (observe && !observe(t_prev, t, y, seg)) break;
        } else {
            h *= std::min(1.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            h_suggest = h;
            last_rejected = true;
        }
    }
    if (opt.h_carry) *opt.h_carry = std::abs(h_suggest);
    return y;
}

} // namespace dicke
