#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicke/classical.hpp"
#include "dicke/modes.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace dicke;

TEST_CASE("glin_matrix branches") {
    GLinMatrix g = glin_matrix(0.0, 1.0, 1.0);
    CHECK(g.g1 == 1.0);
    CHECK(g.g2 == 2.0);
    CHECK(g.g3 == 0.0);
    CHECK(g.g4 == 1.0);

    g = glin_matrix(1.0, 1.0, 1.0);
    CHECK(g.g1 == 1.0);
    CHECK(g.g2 == 2.0);
    CHECK(g.g3 == 0.5);
    CHECK(g.g4 == 1.0);
    // kappa -> 1+ limit coincides
    const GLinMatrix ga = glin_matrix(1.0 + 1e-12, 1.0, 1.0);
    CHECK(ga.g2 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(ga.g3 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ga.g4 == doctest::Approx(1.0).epsilon(1e-10));

    g = glin_matrix(2.0, 1.0, 1.0);
    CHECK(g.g1 == 1.0);
    CHECK(g.g2 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(g.g3 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(g.g4 == 2.0);

    // oscillatory criterion g1 g4 > g2 g3 away from kappa = 1
    for (double kappa : {0.0, 0.3, 0.9, 1.1, 2.0, 5.0}) {
        g = glin_matrix(kappa, 1.3, 0.8);
        if (kappa != 1.0) CHECK(g.g1 * g.g4 > g.g2 * g.g3);
    }
}

TEST_CASE("mode_frequencies closed forms") {
    auto [wm, wp] = mode_frequencies(1.0, 1.0, 1.0);
    CHECK(wm == 0.0); // soft mode, exactly
    CHECK(wp == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    std::tie(wm, wp) = mode_frequencies(0.5, 1.0, 1.0);
    CHECK(wp == doctest::Approx(1.3065629648763766).epsilon(1e-13));
    CHECK(wm == doctest::Approx(0.5412090313604618).epsilon(1e-13));

    std::tie(wm, wp) = mode_frequencies(2.0, 1.0, 1.0);
    CHECK(wp == doctest::Approx(2.0743132055142266).epsilon(1e-13));
    CHECK(wm == doctest::Approx(0.8349996181245198).epsilon(1e-13));

    // exact soft mode for asymmetric Omega/Delta too
    std::tie(wm, wp) = mode_frequencies(1.0, 1.2, 0.7);
    CHECK(wm == 0.0);
}

TEST_CASE("continuity at kappa = 1") {
    // omega_- vanishes like sqrt(|kappa-1|) with different slopes of omega_-^2
    // on the two sides (the QPT kink), so the branch gap at 1 +- eps is
    // O(sqrt(eps)), not O(eps): 9.3e-6 at eps = 1e-9. Both branches are
    // checked against that exact bound and against zero.
    const double eps = 1e-9;
    const auto below = mode_frequencies(1.0 - eps, 1.0, 1.0);
    const auto above = mode_frequencies(1.0 + eps, 1.0, 1.0);
    CHECK(std::abs(below.second - above.second) < 1e-6); // omega_+ is smooth
    CHECK(below.first < std::sqrt(eps));
    CHECK(above.first < std::sqrt(2.0 * eps) * 1.0000001);
    CHECK(std::abs(below.first - above.first) < std::sqrt(2.0 * eps));
}

TEST_CASE("mode_weights") {
    ModeResult m = mode_weights(0.5, 1.0, 1.0);
    CHECK(m.w_minus == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.w_plus == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.beta == doctest::Approx(M_PI / 4).epsilon(1e-12));

    // kappa -> 0 with Omega > Delta: spin-like mode (omega_- -> Delta) carries all weight
    m = mode_weights(1e-10, 1.2, 1.0);
    CHECK(m.w_minus > 1.0 - 1e-4);
    CHECK(mode_frequencies(1e-10, 1.2, 1.0).first == doctest::Approx(1.0).epsilon(1e-9));

    // kappa -> 0 with Omega < Delta: now omega_+ -> Delta and w_+ -> 1
    m = mode_weights(1e-10, 0.8, 1.0);
    CHECK(m.w_plus > 1.0 - 1e-4);
    CHECK(m.beta > M_PI / 2); // reported branch for Omega < Delta
    CHECK(mode_frequencies(1e-10, 0.8, 1.0).second == doctest::Approx(1.0).epsilon(1e-9));

    m = mode_weights(10.0, 1.0, 1.0);
    CHECK(m.w_plus > 0.9);

    for (double kappa : {0.0, 0.4, 1.0, 1.7, 8.0}) {
        for (double om : {0.8, 1.0, 1.25}) {
            m = mode_weights(kappa, om, 1.0);
            CHECK(m.w_minus + m.w_plus == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(m.w_minus >= 0.0);
            CHECK(m.w_plus >= 0.0);
            CHECK(m.w_minus <= 1.0);
            CHECK(m.w_plus <= 1.0);
        }
    }
}

TEST_CASE("frequencies equal eigenvalues of the assembled 4x4 matrix") {
    for (int i = 0; i <= 200; ++i) {
        const double kappa = static_cast<double>(i) * 5.0 / 200.0;
        for (double om : {0.8, 1.0, 1.2}) {
            const GLinMatrix g = glin_matrix(kappa, om, 1.0);
            Eigen::Matrix4d glin;
            glin << 0, g.g1, 0, 0, g.g1, 0, g.g2, 0, 0, 0, 0, g.g4, g.g3, 0, g.g4, 0;
            // eigenvalues are +-omega_pm; biquadratic characteristic polynomial,
            // smaller root in the cancellation-free form det/s+
            const double tr = g.g1 * g.g1 + g.g4 * g.g4;
            const double det = g.g1 * g.g4 * (g.g1 * g.g4 - g.g2 * g.g3);
            const double sp = 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
            const double sm = det / sp;
            const auto [wm, wp] = mode_frequencies(kappa, om, 1.0);
            CHECK(std::abs(wp - std::sqrt(sp)) < 1e-10);
            CHECK(std::abs(wm - std::sqrt(sm)) < 1e-10);
            if (std::abs(kappa - 1.0) > 0.05) { // generic eigensolver cross-check away from the defective point
                const Eigen::Vector4cd ev = glin.eigenvalues();
                double lo = 1e300, hi = 0.0;
                for (int q = 0; q < 4; ++q) {
                    const double a = std::abs(ev(q).real());
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
                CHECK(std::abs(wp - hi) < 1e-6);
                CHECK(std::abs(wm - lo) < 1e-6);
            }
        }
    }
}

TEST_CASE("linear response formula basics") {
    CHECK(linear_response_jx(0.0, 0.3, 1.1, 0.9) == doctest::Approx(1.0).epsilon(1e-12));
    // kappa = 0, resonance: single bare-spin mode cos(Delta t)
    for (double t : {0.0, 0.7, 2.9, 11.0})
        CHECK(linear_response_jx(t, 0.0, 1.0, 1.0) == doctest::Approx(std::cos(t)).epsilon(1e-10));
}

TEST_CASE("response spectrum structure") {
    auto peaks = response_spectrum(0.0, 1.0, 1.0);
    CHECK(peaks[0].omega == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(peaks[3].omega == doctest::Approx(1.0).epsilon(1e-14));
    double total = 0.0;
    for (const auto& p : peaks) total += p.weight;
    CHECK(total == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    // symmetric in omega -> -omega
    CHECK(peaks[0].weight == peaks[3].weight);
    CHECK(peaks[1].weight == peaks[2].weight);

    // derived frequencies at kappa = 0.95 (omega_pm^2 = 1 +- sqrt(0.95))
    peaks = response_spectrum(0.95, 1.0, 1.0);
    CHECK(peaks[2].omega == doctest::Approx(std::sqrt(1.0 - std::sqrt(0.95))).epsilon(1e-12));
    CHECK(peaks[3].omega == doctest::Approx(std::sqrt(1.0 + std::sqrt(0.95))).epsilon(1e-12));
}

TEST_CASE("linear response matches nonlinear integration of a kicked stationary state") {
    const double delta_theta = 1e-4;
    for (double kappa : {0.5, 2.0}) {
        const auto sols = stationary_solutions(kappa);
        const ClassicalState s = sols[0].state;
        const SpinTriple sp = planar_to_spin(s.z);
        // rotate the spin about the y axis by delta_theta
        const SpinTriple rotated{sp.jx * std::cos(delta_theta) + sp.jz * std::sin(delta_theta), sp.jy,
                                 sp.jz * std::cos(delta_theta) - sp.jx * std::sin(delta_theta)};
        const ClassicalState kicked{planar_from_triple(rotated), s.alpha_bar};
        const double jx0 = planar_to_spin(kicked.z).jx - sp.jx;

        const Trajectory traj = integrate(kicked, kappa, 1.0, 1.0, 50.0, 1e-12, 501);
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const double ratio = (planar_to_spin(traj.states[k].z).jx - sp.jx) / jx0;
            worst = std::max(worst, std::abs(ratio - linear_response_jx(traj.times[k], kappa, 1.0, 1.0)));
        }
        CHECK(worst < 1e-5);
    }
}
