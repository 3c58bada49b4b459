#include <cmath>

#include "doctest.h"
#include "dicke/cpb.hpp"
#include "dicke/errors.hpp"
#include "oracles.hpp"

using namespace dicke;

TEST_CASE("cpb_hamiltonian structure") {
    const CpbSpec spec(1.0, 0.3, 0.2, 7);
    const Eigen::MatrixXd h = cpb_hamiltonian(spec);
    REQUIRE(h.rows() == 15);
    for (int n = -7; n <= 7; ++n) {
        const int i = spec.index_of(n);
        CHECK(h(i, i) == doctest::Approx(4.0 * (n - 0.2) * (n - 0.2)).epsilon(1e-15));
        if (n < 7) CHECK(h(i, i + 1) == -0.15);
        for (int k = 0; k < 15; ++k)
            if (std::abs(k - i) > 1) REQUIRE(h(i, k) == 0.0);
    }
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cpb without tunnelling") {
    SUBCASE("integer gate: ground state is |0>") {
        const auto sp = cpb_spectrum(CpbSpec(1.0, 0.0, 0.0));
        CHECK(sp.energies(0) == 0.0);
        CHECK(std::abs(sp.states(CpbSpec(1.0, 0.0, 0.0).index_of(0), 0)) == 1.0);
    }
    SUBCASE("half-integer gate: degenerate pair {|0>, |1>} at energy 1") {
        const auto sp = cpb_spectrum(CpbSpec(1.0, 0.0, 0.5));
        CHECK(sp.energies(0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(sp.energies(1) == doctest::Approx(1.0).epsilon(1e-15));
        const auto r = verify_sweet_spot_states(CpbSpec(1.0, 0.0, 0.5));
        CHECK(r.overlap_g == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.overlap_e == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.splitting == doctest::Approx(0.0));
    }
}

TEST_CASE("sweet-spot splitting equals E_J") {
    const CpbSpec spec(1.0, 0.04, 0.5);
    const double ref_split = [&] {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cpb_hamiltonian(spec));
        return es.eigenvalues()(1) - es.eigenvalues()(0);
    }();
    CHECK(std::abs(ref_split - 0.04) <= 1e-6);
    CHECK(verify_sweet_spot_states(spec).splitting == doctest::Approx(ref_split).epsilon(1e-12));
}

TEST_CASE("verify_sweet_spot_states examples") {
    const auto a = verify_sweet_spot_states(CpbSpec(1.0, 0.02, 0.5));
    CHECK(a.n == 0);
    CHECK(a.overlap_g >= 0.999);
    CHECK(a.overlap_e >= 0.999);
    const auto b = verify_sweet_spot_states(CpbSpec(1.0, 0.02, 1.5));
    CHECK(b.n == 1);
    CHECK(b.overlap_g == doctest::Approx(a.overlap_g).epsilon(1e-12));
    CHECK(b.overlap_e == doctest::Approx(a.overlap_e).epsilon(1e-12));
    CHECK_THROWS_AS(verify_sweet_spot_states(CpbSpec(1.0, 0.02, 0.3)), UsageError);
    CHECK_THROWS_AS(verify_sweet_spot_states(CpbSpec(1.0, 1.5, 0.5)), UsageError);
}

TEST_CASE("two_level_reduction examples") {
    const auto r = two_level_reduction(CpbSpec(1.0, 0.04, 0.5));
    CHECK(r.omega0_eff == doctest::Approx(0.04).epsilon(1e-4));
    CHECK(r.charge_matrix_element == doctest::Approx(0.5).epsilon(1e-3));
    CHECK_FALSE(r.higher_levels_near_degenerate);
    const auto z = two_level_reduction(CpbSpec(1.0, 0.0, 0.25));
    CHECK(z.charge_matrix_element == 0.0);
    CHECK(z.omega0_eff == doctest::Approx(2.0).epsilon(1e-14));
    // E_J = 0 at an integer gate: the first excited pair |+-1> is degenerate.
    CHECK_THROWS_AS(two_level_reduction(CpbSpec(1.0, 0.0, 0.0)), UsageError);
}

TEST_CASE("cpb invariants") {
    SUBCASE("cutoff insensitivity") {
        for (double ej : {0.05, 0.3, 1.0})
            for (double ng : {0.0, 0.25, 0.5, -1.3}) {
                const int n0 = CpbSpec::minimum_cutoff(ng);
                const auto a = cpb_spectrum(CpbSpec(1.0, ej, ng, n0));
                const auto b = cpb_spectrum(CpbSpec(1.0, ej, ng, n0 + 5));
                CHECK(std::abs(a.energies(0) - b.energies(0)) <= 1e-10);
                CHECK(std::abs(a.energies(1) - b.energies(1)) <= 1e-10);
            }
    }
    SUBCASE("gate periodicity") {
        for (double ng : {0.0, 0.1, 0.5, 0.77}) {
            const auto a = cpb_spectrum(CpbSpec(1.0, 0.4, ng, 20));
            const auto b = cpb_spectrum(CpbSpec(1.0, 0.4, ng + 1.0, 20));
            for (int k = 0; k < 6; ++k) CHECK(std::abs(a.energies(k) - b.energies(k)) <= 1e-12);
        }
    }
    SUBCASE("overlap_g grows as E_J / E_C shrinks") {
        double prev = 0.0;
        for (double ratio : {0.2, 0.1, 0.05, 0.01}) {
            const double ov = verify_sweet_spot_states(CpbSpec(1.0, ratio, 0.5)).overlap_g;
            CHECK(ov > prev);
            prev = ov;
        }
        CHECK(prev > 0.9999);
    }
}

TEST_CASE("CpbSpec validation") {
    CHECK_THROWS_AS(CpbSpec(0.0, 0.1, 0.5), ConfigError);
    CHECK_THROWS_AS(CpbSpec(1.0, -0.1, 0.5), ConfigError);
    CHECK_THROWS_AS(CpbSpec(1.0, 0.1, 2.5, 7), ConfigError);
    CHECK_NOTHROW(CpbSpec(1.0, 0.1, 2.5, 8));
}

TEST_CASE("sweep rows") {
    const auto row = cpb_sweep_row(CpbSpec(1.0, 0.05, 0.5));
    const auto rep = verify_sweet_spot_states(CpbSpec(1.0, 0.05, 0.5));
    CHECK(row.overlap_g == rep.overlap_g);
    CHECK(row.levels[1] - row.levels[0] == doctest::Approx(rep.splitting).epsilon(1e-14));
    CHECK(row.levels[3] >= row.levels[2]);
}
