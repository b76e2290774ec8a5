#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qst/chain_model.hpp"

using namespace qst;
using doctest::Approx;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("single-excitation hamiltonian layout") {
    SUBCASE("two-site hopping matrix") {
        ChainSpec spec{2, {1.0}, {0.0, 0.0}};
        const Eigen::MatrixXd h = build_single_excitation_hamiltonian(spec);
        CHECK(h(0, 0) == 0.0);
        CHECK(h(0, 1) == 1.0);
        CHECK(h(1, 0) == 1.0);
        CHECK(h(1, 1) == 0.0);
    }
    SUBCASE("uniform path graph N=3") {
        const Eigen::MatrixXd h =
            build_single_excitation_hamiltonian(ChainSpec::uniform(3));
        CHECK(h(0, 1) == 1.0);
        CHECK(h(1, 2) == 1.0);
        CHECK(h(0, 2) == 0.0);
        CHECK(h.diagonal().isZero());
        CHECK((h - h.transpose()).norm() == 0.0);
    }
    SUBCASE("diagonal is twice the field") {
        ChainSpec spec{3, {1.0, 1.0}, {0.5, 0.0, 0.0}};
        const Eigen::MatrixXd h = build_single_excitation_hamiltonian(spec);
        CHECK(h(0, 0) == 1.0);
        CHECK(h(1, 1) == 0.0);
        CHECK(h(2, 2) == 0.0);
        CHECK(h(0, 1) == 1.0);
    }
    SUBCASE("rejects bad specs") {
        CHECK_THROWS_AS(ChainSpec::uniform(1).validate(),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_single_excitation_hamiltonian(
                            ChainSpec{2, {0.0}, {0.0, 0.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_single_excitation_hamiltonian(
                            ChainSpec{2, {-1.0}, {0.0, 0.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_single_excitation_hamiltonian(
                            ChainSpec{3, {1.0}, {0.0, 0.0, 0.0}}),
                        std::invalid_argument);
    }
}

TEST_CASE("spectral decomposition") {
    SUBCASE("uniform N=2 eigenvalues") {
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(2));
        CHECK(sd.eigenvalues(0) == Approx(-1.0).epsilon(1e-12));
        CHECK(sd.eigenvalues(1) == Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("uniform N=3 eigenvalues") {
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(3));
        CHECK(sd.eigenvalues(0) == Approx(-std::sqrt(2.0)).epsilon(1e-12));
        CHECK(sd.eigenvalues(1) == Approx(0.0).epsilon(1e-12));
        CHECK(sd.eigenvalues(2) == Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("orthogonality and reconstruction") {
        DisorderModel dm{1.0, 0.4, 99};
        const ChainSpec spec = sample_random_chain(dm, 12);
        const Eigen::MatrixXd h = build_single_excitation_hamiltonian(spec);
        const SpectralData sd = spectral_decompose(h);
        const Eigen::MatrixXd vtv =
            sd.eigenvectors.transpose() * sd.eigenvectors;
        CHECK((vtv - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() <
              kSpectralTol);
        const Eigen::MatrixXd rebuilt = sd.eigenvectors *
                                        sd.eigenvalues.asDiagonal() *
                                        sd.eigenvectors.transpose();
        CHECK((rebuilt - h).cwiseAbs().maxCoeff() < kSpectralTol);
    }
    SUBCASE("closed-form eigenvalues and eigenvector pattern") {
        const int n = 7;
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(n));
        for (int k = 1; k <= n; ++k) {
            // eigenvalues ascend; closed form descends in k
            const double expected = uniform_chain_eigenvalue(n, 1.0, n + 1 - k);
            CHECK(sd.eigenvalues(k - 1) == Approx(expected).epsilon(1e-10));
        }
        // |V_nk| matches sqrt(2/(N+1))·|sin(pi k n/(N+1))| up to column order
        for (int col = 0; col < n; ++col) {
            const int k = n - col;  // ascending order reverses k
            for (int row = 0; row < n; ++row) {
                const double expected =
                    std::sqrt(2.0 / (n + 1)) *
                    std::abs(std::sin(kPi * k * (row + 1) / (n + 1)));
                CHECK(std::abs(std::abs(sd.eigenvectors(row, col)) - expected) <
                      1e-9);
            }
        }
    }
}

TEST_CASE("propagator amplitudes") {
    SUBCASE("identity at t=0") {
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(5));
        for (int m = 1; m <= 5; ++m)
            for (int n = 1; n <= 5; ++n) {
                const Complex f = propagator_amplitude(sd, m, n, 0.0);
                CHECK(std::abs(f - (m == n ? 1.0 : 0.0)) < 1e-14);
            }
    }
    SUBCASE("two-site amplitude is -i sin(Jt)") {
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(2));
        for (double t : {0.3, 1.0, kPi / 2, 2.5}) {
            const Complex f = propagator_amplitude(sd, 2, 1, t);
            CHECK(std::abs(f - Complex{0.0, -std::sin(t)}) < 1e-12);
        }
        CHECK(std::abs(propagator_amplitude(sd, 2, 1, kPi / 2)) ==
              Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("three-site perfect transfer at pi/sqrt(2)") {
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(3));
        CHECK(std::abs(propagator_amplitude(sd, 3, 1, kPi / std::sqrt(2.0))) ==
              Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("bounded by one") {
        DisorderModel dm{1.0, 0.3, 7};
        const SpectralData sd = spectral_decompose(sample_random_chain(dm, 9));
        for (double t : {0.1, 1.7, 13.0, 211.0})
            for (int m = 1; m <= 9; ++m)
                CHECK(std::abs(propagator_amplitude(sd, m, 1, t)) <=
                      1.0 + 1e-12);
    }
    SUBCASE("index bounds") {
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(3));
        CHECK_THROWS_AS(propagator_amplitude(sd, 0, 1, 1.0),
                        std::out_of_range);
        CHECK_THROWS_AS(propagator_amplitude(sd, 1, 4, 1.0),
                        std::out_of_range);
    }
}

TEST_CASE("propagator matrix properties") {
    DisorderModel dm{1.0, 0.25, 2024};
    const ChainSpec spec = sample_random_chain(dm, 8);
    const SpectralData sd = spectral_decompose(spec);

    SUBCASE("unitarity") {
        for (double t : {0.5, 3.3, 17.0}) {
            const Eigen::MatrixXcd f = propagator(sd, t);
            CHECK((f * f.adjoint() - Eigen::MatrixXcd::Identity(8, 8))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
        }
    }
    SUBCASE("time reversal") {
        for (double t : {0.7, 4.1})
            for (int m = 1; m <= 8; ++m)
                for (int n = 1; n <= 8; ++n)
                    CHECK(std::abs(propagator_amplitude(sd, m, n, -t) -
                                   std::conj(propagator_amplitude(sd, n, m, t))) <
                          1e-12);
    }
    SUBCASE("mirror symmetry of the uniform chain") {
        const SpectralData usd = spectral_decompose(ChainSpec::uniform(8));
        for (double t : {0.9, 5.2}) {
            CHECK(std::abs(std::abs(propagator_amplitude(usd, 8, 1, t)) -
                           std::abs(propagator_amplitude(usd, 1, 8, t))) <
                  1e-12);
            for (int m = 1; m <= 8; ++m)
                for (int n = 1; n <= 8; ++n)
                    CHECK(std::abs(
                              std::abs(propagator_amplitude(usd, m, n, t)) -
                              std::abs(propagator_amplitude(usd, 9 - m, 9 - n,
                                                            t))) < 1e-12);
        }
    }
    SUBCASE("global sign of H leaves probabilities unchanged") {
        const Eigen::MatrixXd h = build_single_excitation_hamiltonian(spec);
        const SpectralData flipped = spectral_decompose(Eigen::MatrixXd(-h));
        for (double t : {0.8, 2.9})
            for (int m = 1; m <= 8; ++m)
                CHECK(std::norm(propagator_amplitude(sd, m, 1, t)) ==
                      Approx(std::norm(propagator_amplitude(flipped, m, 1, t)))
                          .epsilon(1e-12));
    }
    SUBCASE("propagate matches the matrix route") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
        v(0) = Complex{0.6, 0.0};
        v(3) = Complex{0.0, 0.8};
        const Eigen::VectorXcd direct = propagator(sd, 2.3) * v;
        const Eigen::VectorXcd fast = propagate(sd, v, 2.3);
        CHECK((direct - fast).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("closed-form agreement for uniform chains") {
    for (int n = 2; n <= 20; ++n) {
        const SpectralData sd = spectral_decompose(ChainSpec::uniform(n));
        for (int i = 1; i <= 12; ++i) {
            const double t = 0.6 * n * i / 12.0;
            const Complex via_formula = uniform_chain_amplitude(n, 1.0, n, 1, t);
            CHECK(std::abs(propagator_amplitude(sd, n, 1, t) - via_formula) <
                  1e-10);
        }
    }
}

TEST_CASE("disorder sampling") {
    SUBCASE("zero spread gives the base coupling exactly") {
        const ChainSpec spec = sample_random_chain({2.5, 0.0, 1}, 6);
        for (double j : spec.couplings) CHECK(j == 2.5);
    }
    SUBCASE("deterministic for a fixed seed") {
        const ChainSpec a = sample_random_chain({1.0, 0.1, 42}, 10);
        const ChainSpec b = sample_random_chain({1.0, 0.1, 42}, 10);
        CHECK(a.couplings == b.couplings);
        const ChainSpec c = sample_random_chain({1.0, 0.1, 43}, 10);
        CHECK(a.couplings != c.couplings);
    }
    SUBCASE("samples stay inside the band") {
        double lo = 1e9, hi = -1e9;
        for (int s = 0; s < 1000; ++s) {
            const ChainSpec spec =
                sample_random_chain({1.0, 0.1, static_cast<uint64_t>(s)}, 11);
            for (double j : spec.couplings) {
                lo = std::min(lo, j);
                hi = std::max(hi, j);
            }
        }
        CHECK(lo >= 0.9);
        CHECK(hi <= 1.1);
        // 10^4 draws should come close to the edges
        CHECK(lo < 0.905);
        CHECK(hi > 1.095);
    }
    SUBCASE("rejects spread outside [0,1)") {
        CHECK_THROWS_AS(sample_random_chain({1.0, 1.0, 0}, 5),
                        std::invalid_argument);
        CHECK_THROWS_AS(sample_random_chain({1.0, -0.1, 0}, 5),
                        std::invalid_argument);
    }
}
