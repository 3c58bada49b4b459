#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dicke/errors.hpp"
#include "dicke/meanfield.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

DickeModel two_level(double omega, double omega0, double lambda, double kappa = 0.0) {
    return DickeModel(omega, 1, AtomSpec::two_level(omega0, lambda), kappa);
}

DickeModel ladder(double l01, double l12, double kappa = 0.0) {
    return DickeModel(1.0, 1, AtomSpec::ladder(1.0, 2.0, l01, l12), kappa);
}

std::vector<std::vector<double>> couplings_of(const AtomSpec& atom) {
    std::vector<std::vector<double>> c(atom.levels(), std::vector<double>(atom.levels()));
    for (int i = 0; i < atom.levels(); ++i)
        for (int j = 0; j < atom.levels(); ++j) c[i][j] = atom.coupling(i, j);
    return c;
}

double oracle_energy(const DickeModel& m, double x) {
    return oracle::energy(m.dressed_omega(), m.atom().energies(), couplings_of(m.atom()), x);
}

const CouplingAxis ladder_axis{LevelPair(1, 2), {}, KappaRule::fixed};

}  // namespace

TEST_CASE("energy_density examples") {
    CHECK(energy_density(two_level(1, 1, 0.5), 0.0) == 0.0);
    for (double x : {0.0, 0.1, 0.7, 1.5, 3.0})
        CHECK(energy_density(two_level(1, 1, 0.5), x) ==
              doctest::Approx(x * x + 0.5 - std::sqrt(0.25 + x * x)).epsilon(1e-13));
    const auto lc = oracle::ladder_critical(1.0, 1.0, 2.0);
    CHECK(lc.lambda_c == doctest::Approx(1.20711).epsilon(1e-5));
    CHECK(lc.x_c == doctest::Approx(1.1892).epsilon(1e-4));
    CHECK(std::abs(energy_density(ladder(0, 1.2071), 1.1892)) < 1e-3);
    CHECK(std::abs(energy_density(ladder(0, lc.lambda_c), lc.x_c)) < 1e-13);
}

TEST_CASE("energy_density agrees with characteristic-polynomial roots") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const DickeModel m(0.5 + u(rng), 1, AtomSpec::ladder(0.2 + u(rng), 1.5 + u(rng), 2 * u(rng), 2 * u(rng)),
                           0.3 * u(rng));
        const double x = 3 * u(rng);
        worst = std::max(worst, std::abs(energy_density(m, x) - oracle_energy(m, x)));
        const DickeModel t = two_level(0.5 + u(rng), 0.2 + u(rng), u(rng), 0.2 * u(rng));
        worst = std::max(worst, std::abs(energy_density(t, x) - oracle_energy(t, x)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("minimize: two-level below and above the critical coupling") {
    const auto below = minimize(two_level(1, 1, 0.45));
    CHECK(below.x_star == 0.0);
    CHECK(below.occupations == std::vector<double>{1.0, 0.0});

    const auto above = minimize(two_level(1, 1, 0.75));
    const double x2 = (4 * std::pow(0.75, 4) - 0.25) / (4 * 0.75 * 0.75);
    CHECK(above.x_star == doctest::Approx(std::sqrt(x2)).epsilon(1e-7));
    CHECK(above.e_star == doctest::Approx(oracle::grid_min([](double x) { return oracle_energy(two_level(1, 1, 0.75), x); }, 0, 3).e).epsilon(1e-10));
    double sum = 0;
    for (double p : above.occupations) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("minimize: ladder below its critical coupling stays normal") {
    const auto s = minimize(ladder(0, 1.0));
    CHECK(s.x_star == 0.0);
    CHECK(s.occupations == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(s.e_star == 0.0);
}

TEST_CASE("minimize: global minimum beats random probes") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const DickeModel& m : {ladder(0, 1.2071), ladder(0.06, 1.21), ladder(0.3, 1.6), two_level(1, 1, 0.51),
                                two_level(0.7, 1.8, 1.3, 0.1)}) {
        const auto s = minimize(m);
        CHECK(s.e_star <= energy_density(m, 0.0));
        for (int i = 0; i < 1000; ++i) {
            const double x = s.x_max * u(rng);
            REQUIRE(s.e_star <= energy_density(m, x) + 1e-12);
        }
        for (double p : s.occupations) CHECK((p >= 0.0 && p <= 1.0));
    }
}

TEST_CASE("scan_order_parameter") {
    SUBCASE("two-level: zero up to lambda_c, then the closed-form branch") {
        std::vector<double> values;
        for (int i = 0; i <= 60; ++i) values.push_back(0.2 + 0.01 * i);
        const auto sols = scan_order_parameter(two_level(1, 1, 0.5), CouplingAxis{}, values);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] <= 0.5)
                CHECK(sols[i].x_star == 0.0);
            else
                CHECK(sols[i].x_star == doctest::Approx(oracle::two_level_x_star(1, 1, values[i])).epsilon(1e-6));
        }
    }
    SUBCASE("ladder: x jumps from 0 to the branch value") {
        const auto lc = oracle::ladder_critical(1, 1, 2);
        const std::vector<double> values{1.0, 1.1, 1.2, lc.lambda_c - 1e-6, lc.lambda_c + 1e-6, 1.3};
        const auto sols = scan_order_parameter(ladder(0, 1), ladder_axis, values);
        CHECK(sols[3].x_star == 0.0);
        CHECK(sols[4].x_star == doctest::Approx(lc.x_c).epsilon(1e-4));
        CHECK(sols[5].x_star > 1.19);
    }
    SUBCASE("all couplings zero") {
        const DickeModel m(1.0, 1, AtomSpec({0, 1, 2}, Eigen::MatrixXd::Zero(3, 3)));
        for (double kappa : {0.0, 0.5}) {
            const auto s = minimize(m.with_kappa(kappa));
            CHECK(s.x_star == 0.0);
            CHECK(s.local_minima.size() == 1);
        }
    }
}

TEST_CASE("scan_order_parameter: usage errors, determinism, worker independence") {
    CHECK_THROWS_AS(scan_order_parameter(ladder(0, 1), ladder_axis, std::vector<double>{}), UsageError);
    CHECK_THROWS_AS(scan_order_parameter(ladder(0, 1), ladder_axis, std::vector<double>{1.0}), UsageError);
    CHECK_THROWS_AS(scan_order_parameter(ladder(0, 1), ladder_axis, std::vector<double>{1.2, 1.1}), UsageError);

    std::vector<double> values;
    for (int i = 0; i < 40; ++i) values.push_back(1.0 + 0.01 * i);
    const auto a = scan_order_parameter(ladder(0.05, 1), ladder_axis, values, {}, 1);
    const auto b = scan_order_parameter(ladder(0.05, 1), ladder_axis, values, {}, 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(a[i].x_star == b[i].x_star);
        CHECK(a[i].e_star == b[i].e_star);
        CHECK(a[i].occupations == b[i].occupations);
    }
}

TEST_CASE("critical_coupling: two-level is second order at sqrt(omega omega0)/2") {
    const auto tp = critical_coupling(two_level(1, 1, 0.5), CouplingAxis{}, 0.1, 2.0);
    CHECK(tp.coupling_value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(tp.order == TransitionOrder::second);
    CHECK(tp.x_jump < 0.01);
    CHECK(tp.pop_jump < 0.01);
}

TEST_CASE("critical_coupling: ladder with lambda_01 = 0 is first order") {
    const auto lc = oracle::ladder_critical(1, 1, 2);
    // Independent check of the closed form with a fine scan of e(x).
    const double scanned = oracle::critical_by_scan(
        [](double l, double x) { return oracle::energy(1.0, {0, 1, 2}, {{0, 0, 0}, {0, 0, l}, {0, l, 0}}, x); },
        1.0, 1.5, 0.05, 3.0);
    CHECK(scanned == doctest::Approx(lc.lambda_c).epsilon(1e-7));

    const auto tp = critical_coupling(ladder(0, 1), ladder_axis, 1.0, 1.5);
    CHECK(std::abs(tp.coupling_value - lc.lambda_c) <= 1e-6);
    CHECK(tp.order == TransitionOrder::first);
    CHECK(std::abs(tp.x_jump - lc.x_c) <= 1e-3);
    CHECK(tp.occupations_below[0] == 1.0);
    CHECK(tp.occupations_above[0] < 0.5);
    CHECK(tp.pop_jump > 0.5);
    CHECK(tp.pop_jump <= 1.0);
}

TEST_CASE("critical_coupling: co-scaled weak ground coupling stays first order") {
    const CouplingAxis axis{LevelPair(1, 2), {{LevelPair(0, 1), 0.05}}, KappaRule::fixed};
    const auto tp = critical_coupling(ladder(0, 1), axis, 1.0, 1.5);
    const double scanned = oracle::critical_by_scan(
        [](double l, double x) {
            return oracle::energy(1.0, {0, 1, 2}, {{0, 0.05 * l, 0}, {0.05 * l, 0, l}, {0, l, 0}}, x);
        },
        1.0, 1.5, 0.05, 3.0);
    CHECK(std::abs(tp.coupling_value - scanned) <= 1e-6);
    CHECK(tp.order == TransitionOrder::first);
    CHECK(tp.x_jump > 0.5);
}

TEST_CASE("critical_coupling: bracket must straddle a transition") {
    CHECK_THROWS_WITH_AS(critical_coupling(two_level(1, 1, 0.5), CouplingAxis{}, 0.6, 2.0), "no transition in bracket",
                         UsageError);
    CHECK_THROWS_WITH_AS(critical_coupling(two_level(1, 1, 0.5), CouplingAxis{}, 0.1, 0.4), "no transition in bracket",
                         UsageError);
}

TEST_CASE("second-order onset is a square root") {
    // |x(l + d) - x(l)| <= C sqrt(d) on a grid straddling lambda_c = 0.5.
    const DickeModel m = two_level(1, 1, 0.5);
    const double d = 1e-4;
    double worst = 0.0;
    for (double l = 0.49; l <= 0.51; l += 0.0005) {
        const double x0 = minimize(m.with_coupling(LevelPair(0, 1), l)).x_star;
        const double x1 = minimize(m.with_coupling(LevelPair(0, 1), l + d)).x_star;
        worst = std::max(worst, std::abs(x1 - x0) / std::sqrt(d));
    }
    CHECK(worst <= 1.5);
}

TEST_CASE("first-order point has degenerate competing minima") {
    const auto tp = critical_coupling(ladder(0, 1), ladder_axis, 1.0, 1.5);
    const DickeModel at = ladder(0, tp.coupling_value);
    const auto s = minimize(at);
    REQUIRE(s.local_minima.size() == 2);
    CHECK(s.local_minima[0].x == 0.0);
    CHECK(std::abs(s.local_minima[0].e - s.local_minima[1].e) <= 1e-8);
    CHECK(tp.x_jump > 1.0);
}

TEST_CASE("scaling covariance") {
    const CouplingAxis tied{LevelPair(1, 2), {{LevelPair(0, 1), 0.05}}, KappaRule::fixed};
    const DickeModel base(1.0, 1, AtomSpec::ladder(1.0, 2.0, 0.07, 1.4), 0.01);
    const auto ref = minimize(base);
    const auto ref_tp = critical_coupling(base, tied, 1.0, 1.6);
    for (double s : {0.5, 2.0, 10.0}) {
        const auto sol = minimize(base.scaled(s));
        CHECK(sol.e_star == doctest::Approx(s * ref.e_star).epsilon(1e-10));
        CHECK(sol.x_star == doctest::Approx(ref.x_star).epsilon(1e-6));
        for (std::size_t j = 0; j < sol.occupations.size(); ++j)
            CHECK(sol.occupations[j] == doctest::Approx(ref.occupations[j]).epsilon(1e-6));
        const auto tp = critical_coupling(base.scaled(s), tied, s * 1.0, s * 1.6);
        CHECK(tp.order == ref_tp.order);
        CHECK(tp.coupling_value == doctest::Approx(s * ref_tp.coupling_value).epsilon(1e-7));
    }
}

TEST_CASE("no_go_check") {
    const CouplingAxis trk{LevelPair(0, 1), {}, KappaRule::trk_ground};
    CHECK(no_go_check(two_level(1, 1, 0), trk, 10.0, 200));
    CHECK_FALSE(no_go_check(two_level(1, 1, 0), CouplingAxis{}, 1.0, 100));
    CHECK(no_go_check(two_level(1, 1, 0), CouplingAxis{}, 0.49, 100));
    CHECK_THROWS_AS(no_go_check(two_level(1, 1, 0), CouplingAxis{}, 1.0, 99), UsageError);

    // Ground transition held at the TRK bound while the excited transition is scanned.
    const double kappa = 0.1 * 0.1 / 1.0;
    CHECK_FALSE(no_go_check(ladder(0.1, 0, kappa), ladder_axis, 3.0, 200));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double w = u(rng), w0 = u(rng);
        CHECK(no_go_check(two_level(w, w0, 0), trk, 10 * std::sqrt(w * w0), 150));
    }
}

TEST_CASE("trk-ground rule tracks lambda_01 on the axis") {
    const CouplingAxis trk{LevelPair(0, 1), {}, KappaRule::trk_ground};
    const DickeModel m = trk.apply(two_level(1, 2, 0), 0.8);
    CHECK(m.kappa() == doctest::Approx(0.32).epsilon(1e-14));
}
