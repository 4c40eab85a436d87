#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicke/classical.hpp"
#include "dicke/model.hpp"

#include <cmath>
#include <random>

using namespace dicke;

TEST_CASE("kappa closed form") {
    const ModelParams half{1.0, 1.0, 1.0, 0.5};
    CHECK(half.kappa() == doctest::Approx(1.0).epsilon(1e-15));
    const ModelParams uncoupled{2.0, 3.0, 0.0, 7.5};
    CHECK(uncoupled.kappa() == 0.0);
    const ModelParams big{1.0, 1.0, 0.1, 100.0};
    CHECK(big.kappa() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ModelParams::from_kappa(100.0, 2.0).lambda == doctest::Approx(0.1).epsilon(1e-14));
    const ModelParams bad_delta{-1.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(bad_delta.validate(), std::invalid_argument);
    const ModelParams bad_lambda{1.0, 1.0, -0.1, 1.0};
    CHECK_THROWS_AS(bad_lambda.validate(), std::invalid_argument);
}

TEST_CASE("planar chart") {
    CHECK(std::abs(spin_to_planar(0.0, 0.3)) == 0.0);
    CHECK(std::abs(spin_to_planar(M_PI / 2, 0.0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(spin_to_planar(M_PI / 2, M_PI / 2) - Complex(0.0, -1.0)) < 1e-15);
    CHECK_THROWS_AS(spin_to_planar(M_PI, 0.0), std::domain_error);
    CHECK_THROWS_AS(spin_to_planar(-0.1, 0.0), std::domain_error);

    SpinTriple s = planar_to_spin(Complex{0.0, 0.0});
    CHECK(s.jx == 0.0);
    CHECK(s.jz == -1.0);
    s = planar_to_spin(Complex{1.0, 0.0});
    CHECK(s.jx == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.jz == doctest::Approx(0.0).epsilon(1e-15));
    s = planar_to_spin(Complex{0.5, 0.0});
    CHECK(s.jx == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s.jy == 0.0);
    CHECK(s.jz == doctest::Approx(-0.6).epsilon(1e-15));
}

TEST_CASE("chart round trip on a dense grid") {
    double max_spin_err = 0.0, max_z_err = 0.0;
    for (int it = 0; it < 120; ++it) {
        const double theta = M_PI * it / 120.0; // excludes theta = pi
        for (int ip = 0; ip < 121; ++ip) {
            const double phi = 2.0 * M_PI * ip / 121.0;
            const Complex z = spin_to_planar(theta, phi);
            const SpinTriple s = planar_to_spin(z);
            max_spin_err = std::max(max_spin_err, std::abs(s.jx - std::cos(phi) * std::sin(theta)));
            max_spin_err = std::max(max_spin_err, std::abs(s.jy - std::sin(phi) * std::sin(theta)));
            max_spin_err = std::max(max_spin_err, std::abs(s.jz + std::cos(theta)));
            max_spin_err = std::max(max_spin_err, std::abs(1.0 - (s.jx * s.jx + s.jy * s.jy + s.jz * s.jz)));
            if (theta < 0.9 * M_PI) // the inverse chart loses digits approaching the pole
                max_z_err = std::max(max_z_err, std::abs(z - planar_from_triple(s)));
        }
    }
    CHECK(max_spin_err < 1e-12);
    CHECK(max_z_err < 1e-12);
}

TEST_CASE("classical energy") {
    CHECK(classical_energy(ClassicalState{}, 0.7) == doctest::Approx(-1.0).epsilon(1e-15));

    const auto sols = stationary_solutions(2.0);
    REQUIRE(sols.size() == 3);
    CHECK(classical_energy(sols[0].state, 2.0) == doctest::Approx(-1.25).epsilon(1e-14));

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double max_dev = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const ClassicalState s{Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}};
        max_dev = std::max(max_dev, std::abs(classical_energy(s, 1.3) - classical_energy(parity(s), 1.3)));
    }
    CHECK(max_dev < 1e-14);
}

TEST_CASE("stationary solutions") {
    auto sols = stationary_solutions(0.5);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].stable);
    CHECK(std::abs(sols[0].state.z) == 0.0);
    CHECK(std::abs(sols[0].state.alpha_bar) == 0.0);

    sols = stationary_solutions(1.0);
    REQUIRE(sols.size() == 1);
    CHECK(std::abs(sols[0].state.z) == 0.0);

    sols = stationary_solutions(2.0);
    REQUIRE(sols.size() == 3);
    CHECK(sols[0].state.z.real() == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    CHECK(sols[0].state.alpha_bar.real() == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK(sols[1].state.z.real() == doctest::Approx(-std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    CHECK(sols[1].state.alpha_bar.real() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK_FALSE(sols[2].stable);

    // parity images with identical energy -(kappa + 1/kappa)/2
    for (double kappa : {1.5, 2.0, 3.7}) {
        sols = stationary_solutions(kappa);
        const ClassicalState p = parity(sols[0].state);
        CHECK(std::abs(p.z - sols[1].state.z) < 1e-15);
        CHECK(std::abs(p.alpha_bar - sols[1].state.alpha_bar) < 1e-15);
        const double e_expect = -0.5 * (kappa + 1.0 / kappa);
        CHECK(classical_energy(sols[0].state, kappa) == doctest::Approx(e_expect).epsilon(1e-12));
        CHECK(std::abs(classical_energy(sols[0].state, kappa) - classical_energy(sols[1].state, kappa)) < 1e-12);
    }

    // every returned stationary state is a fixed point of the flow
    for (double kappa : {0.0, 0.3, 1.0, 1.2, 2.0, 5.0}) {
        for (const auto& s : stationary_solutions(kappa)) {
            const auto rhs = eom_rhs(s.state, kappa, 1.0, 1.0);
            double n = 0.0;
            for (double v : rhs) n += v * v;
            CHECK(std::sqrt(n) < 1e-12);
        }
    }
}

TEST_CASE("parity is an involution") {
    const ClassicalState zero{};
    const ClassicalState p0 = parity(zero);
    CHECK(std::abs(p0.z) == 0.0);
    CHECK(std::abs(p0.alpha_bar) == 0.0);

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const ClassicalState s{Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}};
        const ClassicalState pp = parity(parity(s));
        CHECK(std::abs(pp.z - s.z) == 0.0);
        CHECK(std::abs(pp.alpha_bar - s.alpha_bar) == 0.0);
    }
}
