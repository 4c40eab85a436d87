#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicke/classical.hpp"
#include "dicke/errors.hpp"
#include "dicke/modes.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace dicke;

TEST_CASE("eom_rhs fixed points and free precession") {
    for (const auto& s : stationary_solutions(2.0)) {
        const auto rhs = eom_rhs(s.state, 2.0, 1.0, 1.0);
        for (double v : rhs) CHECK(std::abs(v) < 1e-14);
    }
    const auto rhs0 = eom_rhs(ClassicalState{}, 0.8, 1.3, 0.7);
    for (double v : rhs0) CHECK(v == 0.0);

    // kappa = 0: dz/dt = -i Delta z
    const Complex z0{0.3, -0.4};
    const double delta = 1.7;
    const auto rhs = eom_rhs(ClassicalState{z0, Complex{0.0, 0.0}}, 0.0, 1.0, delta);
    const Complex zdot{rhs[2], rhs[3]};
    CHECK(std::abs(zdot - Complex(0.0, -delta) * z0) < 1e-14);
}

TEST_CASE("eom_jacobian against central differences") {
    std::mt19937 rng(2024);
    const double kappa = 1.4, omega = 0.9, delta = 1.2, h = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ClassicalState s = oracle::random_state(rng);
        const Jacobian4 jac = eom_jacobian(s, kappa, omega, delta);
        double y[4] = {s.alpha_bar.real(), s.alpha_bar.imag(), s.z.real(), s.z.imag()};
        for (int col = 0; col < 4; ++col) {
            double yp[4], ym[4];
            for (int i = 0; i < 4; ++i) yp[i] = ym[i] = y[i];
            yp[col] += h;
            ym[col] -= h;
            const auto fp = eom_rhs(ClassicalState{Complex{yp[2], yp[3]}, Complex{yp[0], yp[1]}}, kappa, omega, delta);
            const auto fm = eom_rhs(ClassicalState{Complex{ym[2], ym[3]}, Complex{ym[0], ym[1]}}, kappa, omega, delta);
            for (int row = 0; row < 4; ++row)
                worst = std::max(worst, std::abs(jac[row][col] - (fp[row] - fm[row]) / (2.0 * h)));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("eom_jacobian at the origin reproduces the linearized-mode parameters") {
    const double kappa = 0.6, omega = 1.1, delta = 0.8;
    const Jacobian4 jac = eom_jacobian(ClassicalState{}, kappa, omega, delta);
    const GLinMatrix g = glin_matrix(kappa, omega, delta);
    CHECK(std::abs(jac[0][1]) == doctest::Approx(g.g1).epsilon(1e-14));
    CHECK(std::abs(jac[1][0]) == doctest::Approx(g.g1).epsilon(1e-14));
    CHECK(std::abs(jac[1][2]) == doctest::Approx(g.g2).epsilon(1e-14));
    CHECK(std::abs(jac[3][0]) == doctest::Approx(g.g3).epsilon(1e-14));
    CHECK(std::abs(jac[2][3]) == doctest::Approx(g.g4).epsilon(1e-14));
    CHECK(std::abs(jac[3][2]) == doctest::Approx(g.g4).epsilon(1e-14));
}

TEST_CASE("jacobian trace identity") {
    // The stereographic chart is not volume preserving:
    // trace J = -2 kappa delta Im(z) Re(alpha_bar), zero at all stationary states.
    std::mt19937 rng(99);
    const double kappa = 1.7, omega = 1.3, delta = 0.9;
    for (int trial = 0; trial < 200; ++trial) {
        const ClassicalState s = oracle::random_state(rng);
        const Jacobian4 jac = eom_jacobian(s, kappa, omega, delta);
        const double tr = jac[0][0] + jac[1][1] + jac[2][2] + jac[3][3];
        const double expect = -2.0 * kappa * delta * s.z.imag() * s.alpha_bar.real();
        CHECK(std::abs(tr - expect) < 1e-12);
    }
    for (const auto& s : stationary_solutions(kappa)) {
        const Jacobian4 jac = eom_jacobian(s.state, kappa, omega, delta);
        CHECK(std::abs(jac[0][0] + jac[1][1] + jac[2][2] + jac[3][3]) < 1e-12);
    }
}

TEST_CASE("integrate: kappa = 0 closed form oracle") {
    const double omega = 0.7, delta = 1.3, t_end = 100.0 / delta;
    oracle::FreeSolution sol{Complex{0.35, -0.2}, Complex{0.4, 0.6}, omega, delta};
    const ClassicalState s0{sol.z0, sol.a0};
    const Trajectory traj = integrate(s0, 0.0, omega, delta, t_end, 1e-11, 401);
    double worst_z = 0.0, worst_a = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        worst_z = std::max(worst_z, std::abs(traj.states[k].z - sol.z(traj.times[k])));
        worst_a = std::max(worst_a, std::abs(traj.states[k].alpha_bar - sol.alpha_bar(traj.times[k])));
    }
    CHECK(worst_z < 1e-9);
    CHECK(worst_a < 1e-9);
}

TEST_CASE("integrate: stationary state stays put") {
    const auto sols = stationary_solutions(2.0);
    const Trajectory traj = integrate(sols[0].state, 2.0, 1.0, 1.0, 50.0, 1e-12, 101);
    for (const auto& s : traj.states) {
        CHECK(std::abs(s.z - sols[0].state.z) < 1e-10);
        CHECK(std::abs(s.alpha_bar - sols[0].state.alpha_bar) < 1e-10);
    }
}

TEST_CASE("integrate: parity equivariance") {
    std::mt19937 rng(4);
    const double kappa = 0.9, omega = 1.0, delta = 1.0, t_end = 30.0;
    for (int trial = 0; trial < 20; ++trial) {
        const ClassicalState s0 = oracle::random_state(rng, 0.8);
        const Trajectory a = integrate(s0, kappa, omega, delta, t_end, 1e-11, 51);
        const Trajectory b = integrate(parity(s0), kappa, omega, delta, t_end, 1e-11, 51);
        for (std::size_t k = 0; k < a.times.size(); ++k) {
            const ClassicalState pa = parity(a.states[k]);
            CHECK(std::abs(pa.z - b.states[k].z) < 1e-8);
            CHECK(std::abs(pa.alpha_bar - b.states[k].alpha_bar) < 1e-8);
        }
    }
}

TEST_CASE("integrate: energy conservation and tol validation") {
    const ClassicalState s0 = initial_state_from_section(-0.5, 0.0, 0.78, 0.1);
    const Trajectory traj = integrate(s0, 0.1, 1.0, 1.0, 200.0 * 2.0 * M_PI, 1e-10, 501);
    double drift = 0.0;
    for (double e : traj.energies) drift = std::max(drift, std::abs(e - traj.energies[0]));
    CHECK(drift / std::abs(traj.energies[0]) < 1e-8);
    CHECK_THROWS_AS(integrate(s0, 0.1, 1.0, 1.0, 1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate(s0, 0.1, 1.0, 1.0, 1.0, 1e-14), std::invalid_argument);
}

TEST_CASE("initial_state_from_section") {
    // regular orbit seed of the Poincare figure set
    const ClassicalState reg = initial_state_from_section(-0.5, 0.0, 0.78, 0.1);
    CHECK(classical_energy(reg, 0.1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(reg.alpha_bar.real() == 0.0);
    CHECK(reg.alpha_bar.imag() > 0.0);
    const SpinTriple s = planar_to_spin(reg.z);
    CHECK(s.jx == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.jy == doctest::Approx(0.78).epsilon(1e-12));
    CHECK(s.jz < 0.0);

    // chaotic seed rescaled by the section rim sqrt(1 - E^2) (the literal
    // figure coordinates are energetically unreachable, see below)
    const double rim = std::sqrt(1.0 - 0.25);
    const ClassicalState cha = initial_state_from_section(-0.5, -0.987 * rim, -0.065 * rim, 0.6);
    CHECK(classical_energy(cha, 0.6) == doctest::Approx(-0.5).epsilon(1e-12));

    CHECK_THROWS_AS(initial_state_from_section(-0.5, -0.987, -0.065, 0.6), EnergyUnreachableError);
    CHECK_THROWS_AS(initial_state_from_section(-2.0, 0.0, 0.0, 0.5), EnergyUnreachableError);
    CHECK_THROWS_AS(initial_state_from_section(-0.5, 0.0, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(initial_state_from_section(-0.5, 0.9, 0.9, 0.5), std::invalid_argument);
}

TEST_CASE("poincare_section basics") {
    // crossing tolerance invariant: re-integrate to a recorded crossing is implicit
    // in the dense-output polish; here check structure and the stationary seed.
    const ClassicalState seed = initial_state_from_section(-0.5, 0.0, 0.78, 0.1);
    const PoincareSection sec = poincare_section(-0.5, 0.1, 1.0, 1.0, {seed}, 200, 4000.0, 1e-10);
    CHECK(sec.points.size() == 200);
    int up = 0, down = 0;
    for (const auto& p : sec.points) {
        CHECK(p.jx * p.jx + p.jy * p.jy <= 1.0);
        (p.direction > 0 ? up : down)++;
    }
    CHECK(up > 0);
    CHECK(down > 0);

    const auto sols = stationary_solutions(2.0);
    const PoincareSection sec2 = poincare_section(classical_energy(sols[0].state, 2.0), 2.0, 1.0, 1.0,
                                                  {sols[0].state}, 10, 200.0, 1e-10);
    CHECK(sec2.points.size() <= 1);
}

TEST_CASE("lyapunov: regular orbit short-run sanity and renorm invariance") {
    const ClassicalState seed = initial_state_from_section(-0.5, 0.0, 0.78, 0.1);
    const double t_end = 300.0 * 2.0 * M_PI;
    const LyapunovResult a = lyapunov_spectrum(seed, 0.1, 1.0, 1.0, t_end, 1.0);
    const LyapunovResult b = lyapunov_spectrum(seed, 0.1, 1.0, 1.0, t_end, 0.5);
    REQUIRE(!a.lambda1.empty());
    for (std::size_t k = 0; k < a.lambda1.size(); ++k) {
        CHECK(a.lambda1[k] >= a.lambda2[k]);
        CHECK(a.lambda2[k] >= 0.0);
    }
    CHECK(a.lambda1.back() < 0.02); // regular: decaying like log(t)/t
    // invariance under halving the renormalization interval (same final time)
    CHECK(std::abs(a.lambda1.back() - b.lambda1.back()) < 0.1 * std::max(a.lambda1.back(), 1e-3));
}
