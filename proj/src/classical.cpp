#include "dicke/classical.hpp"

#include "dicke/errors.hpp"
#include "dicke/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicke {

namespace {

OdeState<4> pack(const ClassicalState& s) {
    return {s.alpha_bar.real(), s.alpha_bar.imag(), s.z.real(), s.z.imag()};
}

ClassicalState unpack(const OdeState<4>& y) {
    return ClassicalState{Complex{y[2], y[3]}, Complex{y[0], y[1]}};
}

std::array<double, 4> rhs_raw(const OdeState<4>& y, double kappa, double omega, double delta) {
    const double Q = y[0], P = y[1], x = y[2], yi = y[3];
    const double n = 1.0 + x * x + yi * yi;
    return {
        omega * P,
        -omega * (Q + 2.0 * x / n),
        delta * (yi - kappa * x * yi * Q),
        -delta * (x + 0.5 * kappa * (1.0 - x * x + yi * yi) * Q),
    };
}

void check_tol(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-4))
        throw std::invalid_argument("integration tol must lie in [1e-13, 1e-4]");
}

} // namespace

std::array<double, 4> eom_rhs(const ClassicalState& state, double kappa, double omega, double delta) {
    return rhs_raw(pack(state), kappa, omega, delta);
}

Jacobian4 eom_jacobian(const ClassicalState& state, double kappa, double omega, double delta) {
    const double Q = state.alpha_bar.real();
    const double x = state.z.real(), y = state.z.imag();
    const double n = 1.0 + x * x + y * y;
    Jacobian4 jac{};
    // dQ/dt = omega P
    jac[0][1] = omega;
    // dP/dt = -omega (Q + 2x/n)
    jac[1][0] = -omega;
    jac[1][2] = -2.0 * omega * (1.0 - x * x + y * y) / (n * n);
    jac[1][3] = 4.0 * omega * x * y / (n * n);
    // dx/dt = delta (y - kappa x y Q)
    jac[2][0] = -delta * kappa * x * y;
    jac[2][2] = -delta * kappa * y * Q;
    jac[2][3] = delta * (1.0 - kappa * x * Q);
    // dy/dt = -delta (x + (kappa/2)(1 - x^2 + y^2) Q)
    jac[3][0] = -0.5 * delta * kappa * (1.0 - x * x + y * y);
    jac[3][2] = -delta * (1.0 - kappa * x * Q);
    jac[3][3] = -delta * kappa * y * Q;
    return jac;
}

Trajectory integrate(const ClassicalState& state0, double kappa, double omega, double delta,
                     double t_end, double tol, std::size_t n_samples) {
    check_tol(tol);
    if (n_samples < 2) throw std::invalid_argument("integrate: n_samples must be >= 2");

    Trajectory traj;
    traj.times.resize(n_samples);
    traj.states.resize(n_samples);
    traj.energies.resize(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k)
        traj.times[k] = t_end * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    traj.states[0] = state0;
    traj.energies[0] = classical_energy(state0, kappa);

    auto rhs = [&](double, const OdeState<4>& y, OdeState<4>& dy) { dy = rhs_raw(y, kappa, omega, delta); };

    std::size_t next = 1;
    auto observe = [&](double t_prev, double t_new, const OdeState<4>&, const DenseSegment<4>& seg) {
        while (next < n_samples && traj.times[next] <= t_new + 1e-15 * std::max(1.0, std::abs(t_new))) {
            const double ts = std::clamp(traj.times[next], t_prev, t_new);
            const ClassicalState s = unpack(seg.eval(ts));
            traj.states[next] = s;
            traj.energies[next] = classical_energy(s, kappa);
            ++next;
        }
        return true;
    };

    OdeOptions opt;
    opt.rtol = opt.atol = tol;
    const OdeState<4> yend = dopri5<4>(rhs, pack(state0), 0.0, t_end, opt, observe);
    if (next == n_samples - 1) { // final sample exactly at t_end
        traj.states[next] = unpack(yend);
        traj.energies[next] = classical_energy(traj.states[next], kappa);
        ++next;
    }
    if (next != n_samples) throw IntegrationError("integrate: sampling incomplete", traj.times[next - 1]);
    return traj;
}

ClassicalState initial_state_from_section(double energy, double jx, double jy, double kappa) {
    if (kappa == 0.0)
        throw std::invalid_argument("initial_state_from_section: P is undetermined by energy at kappa = 0");
    const double r2 = jx * jx + jy * jy;
    if (r2 > 1.0) throw std::invalid_argument("initial_state_from_section: jx^2 + jy^2 > 1");
    const double jz = -std::sqrt(1.0 - r2);
    const double rest = energy - jz;
    if (rest < 0.0)
        throw EnergyUnreachableError("initial_state_from_section: energy unreachable on section");
    const double P = std::sqrt(2.0 * rest / kappa);
    ClassicalState s;
    s.z = planar_from_triple(SpinTriple{jx, jy, jz});
    s.alpha_bar = Complex{0.0, P};
    return s;
}

PoincareSection poincare_section(double energy, double kappa, double omega, double delta,
                                 const std::vector<ClassicalState>& seeds,
                                 std::size_t max_crossings, double t_max, double tol) {
    check_tol(tol);
    PoincareSection section;
    section.energy = energy;
    section.kappa = kappa;

    auto rhs = [&](double, const OdeState<4>& y, OdeState<4>& dy) { dy = rhs_raw(y, kappa, omega, delta); };

    for (const ClassicalState& seed : seeds) {
        std::size_t found = 0;
        auto observe = [&](double t_prev, double t_new, const OdeState<4>&, const DenseSegment<4>& seg) {
            const double q0 = seg.eval(t_prev)[0];
            const double q1 = seg.eval(t_new)[0];
            // transversal crossings only; a state resting on the section never fires
            if ((q0 == 0.0 && q1 != 0.0) || q0 * q1 < 0.0) {
                // bisect the dense interpolant down to machine precision
                double lo = t_prev, hi = t_new;
                double qlo = q0;
                if (q0 == 0.0) {
                    hi = lo;
                } else {
                    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double qm = seg.eval(mid)[0];
                        if (qm == 0.0) { lo = hi = mid; break; }
                        if (qlo * qm < 0.0) hi = mid;
                        else { lo = mid; qlo = qm; }
                    }
                }
                const OdeState<4> yc = seg.eval(0.5 * (lo + hi));
                const SpinTriple s = planar_to_spin(Complex{yc[2], yc[3]});
                const int dir = (q1 > q0) ? +1 : -1;
                section.points.push_back({s.jx, s.jy, dir});
                ++found;
            }
            return found < max_crossings;
        };

        OdeOptions opt;
        opt.rtol = opt.atol = tol;
        dopri5<4>(rhs, pack(seed), 0.0, t_max, opt, observe);
    }
    return section;
}

LyapunovResult lyapunov_spectrum(const ClassicalState& state0, double kappa, double omega, double delta,
                                 double t_end, double renorm_interval, double tol) {
    check_tol(tol);
    if (!(renorm_interval > 0.0)) throw std::invalid_argument("lyapunov_spectrum: renorm_interval must be > 0");

    // y = (orbit[4], v1[4], v2[4])
    auto rhs = [&](double, const OdeState<12>& y, OdeState<12>& dy) {
        OdeState<4> x;
        std::copy(y.begin(), y.begin() + 4, x.begin());
        const auto f = rhs_raw(x, kappa, omega, delta);
        std::copy(f.begin(), f.end(), dy.begin());
        const Jacobian4 jac = eom_jacobian(unpack(x), kappa, omega, delta);
        for (int v = 0; v < 2; ++v) {
            const std::size_t off = 4 + 4 * static_cast<std::size_t>(v);
            for (int i = 0; i < 4; ++i) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += jac[i][k] * y[off + k];
                dy[off + i] = acc;
            }
        }
    };

    OdeState<12> y{};
    {
        const auto x0 = pack(state0);
        std::copy(x0.begin(), x0.end(), y.begin());
        y[4] = 1.0;  // v1 = e1
        y[9] = 1.0;  // v2 = e2
    }

    LyapunovResult res;
    res.renorm_interval = renorm_interval;
    const std::size_t n_steps = static_cast<std::size_t>(std::ceil(t_end / renorm_interval));
    res.times.reserve(n_steps);
    res.lambda1.reserve(n_steps);
    res.lambda2.reserve(n_steps);

    double h_carry = 0.0;
    OdeOptions opt;
    opt.rtol = opt.atol = tol;
    opt.h_carry = &h_carry; // keep the adaptive step across renormalization intervals

    double sum1 = 0.0, sum2 = 0.0;
    double t = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t_next = std::min(t_end, renorm_interval * static_cast<double>(k));
        y = dopri5<12>(rhs, y, t, t_next, opt);
        t = t_next;

        // Gram-Schmidt on (v1, v2)
        double r1 = 0.0;
        for (int i = 0; i < 4; ++i) r1 += y[4 + i] * y[4 + i];
        r1 = std::sqrt(r1);
        for (int i = 0; i < 4; ++i) y[4 + i] /= r1;
        double dot = 0.0;
        for (int i = 0; i < 4; ++i) dot += y[4 + i] * y[8 + i];
        for (int i = 0; i < 4; ++i) y[8 + i] -= dot * y[4 + i];
        double r2 = 0.0;
        for (int i = 0; i < 4; ++i) r2 += y[8 + i] * y[8 + i];
        r2 = std::sqrt(r2);
        for (int i = 0; i < 4; ++i) y[8 + i] /= r2;

        sum1 += std::log(r1);
        sum2 += std::log(r2);
        const double l1 = sum1 / t, l2 = sum2 / t;
        res.times.push_back(t);
        res.lambda1.push_back(std::max({l1, l2, 0.0}));
        res.lambda2.push_back(std::max(std::min(l1, l2), 0.0));
    }
    return res;
}

} // namespace dicke
