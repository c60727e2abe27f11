#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "qdot/analytic.hpp"
#include "qdot/bessel.hpp"
#include "qdot/dipole.hpp"
#include "qdot/error.hpp"

using namespace qdot;
using qdot::testing::device_dipole;
using qdot::testing::device_table;

TEST_SUITE("bessel") {

TEST_CASE("closed forms") {
    for (double x : {0.3, 1.0, 2.5, 7.0}) {
        CHECK(spherical_bessel(BesselKind::j, 0, x) == doctest::Approx(std::sin(x) / x).epsilon(1e-14));
        CHECK(spherical_bessel(BesselKind::y, 0, x) == doctest::Approx(-std::cos(x) / x).epsilon(1e-14));
        CHECK(spherical_bessel(BesselKind::i, 0, x) == doctest::Approx(std::sinh(x) / x).epsilon(1e-14));
        CHECK(spherical_bessel(BesselKind::k, 0, x) == doctest::Approx(std::exp(-x) / x).epsilon(1e-14));
    }
    CHECK(std::abs(spherical_bessel(BesselKind::j, 0, std::numbers::pi)) < 1e-16);
    CHECK_THROWS_AS(spherical_bessel(BesselKind::y, 1, 0.0), DomainError);
    CHECK_THROWS_AS(spherical_bessel(BesselKind::k, 1, -1.0), DomainError);
}

TEST_CASE("Wronskians") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.2, 30.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = dist(rng);
        for (int l = 0; l <= 10; ++l) {
            const double w = spherical_bessel(BesselKind::j, l, x) * spherical_bessel_derivative(BesselKind::y, l, x) -
                             spherical_bessel_derivative(BesselKind::j, l, x) * spherical_bessel(BesselKind::y, l, x);
            CHECK(w * x * x == doctest::Approx(1.0).epsilon(1e-12));
            // i_l k_l' - i_l' k_l = -1/x^2 with k_0 = exp(-x)/x
            const double v = spherical_bessel(BesselKind::i, l, x) * spherical_bessel_derivative(BesselKind::k, l, x) -
                             spherical_bessel_derivative(BesselKind::i, l, x) * spherical_bessel(BesselKind::k, l, x);
            CHECK(v * x * x == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("small-argument series and recurrence agree near the switch") {
    for (int l : {3, 6, 12, 25})
        for (BesselKind k : {BesselKind::j, BesselKind::i}) {
            const double below = spherical_bessel(k, l, 1.0 - 1e-9);
            const double above = spherical_bessel(k, l, 1.0 + 1e-9);
            CHECK(below == doctest::Approx(above).epsilon(1e-8));
        }
}

}

TEST_SUITE("analytic") {

TEST_CASE("finite spherical well, s states") {
    const double inf = std::numeric_limits<double>::infinity();
    const double rw = 5.0, m = 0.13, v = 2000.0;
    const LayeredDevice deep({{rw, 0.0, m}, {inf, v, m}}, "deep");
    const auto roots = find_bound_states(deep, 0, 5e-3);
    REQUIRE(roots.energies.size() >= 2);
    const double c = kSemiconductorUnits.hbar2_over_2me / m;
    // l = 0, equal masses: k cot(k R) = -kappa, with k R in ((n - 1/2) pi, n pi)
    auto mismatch = [&](double x) {
        const double k = x / rw, kappa = std::sqrt(v / c - k * k);
        return k * std::cos(x) + kappa * std::sin(x);
    };
    for (int n = 1; n <= 2; ++n) {
        double lo = (n - 0.5) * std::numbers::pi, hi = n * std::numbers::pi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((mismatch(mid) > 0) == (mismatch(lo) > 0) ? lo : hi) = mid;
        }
        const double e = c * std::pow(lo / rw, 2);
        CHECK(roots.energies[n - 1] == doctest::Approx(e).epsilon(1e-10));
        CHECK(roots.energies[n - 1] < c * std::pow(n * std::numbers::pi / rw, 2));
    }
}

TEST_CASE("determinant is finite and continuous") {
    const LayeredDevice d1 = device_preset("device1");
    double prev = matching_determinant(d1, 0, 1e-4);
    int jumps = 0;
    for (int i = 1; i < 10000; ++i) {
        const double e = 0.9 * i / 10000.0;
        const double d = matching_determinant(d1, 0, e);
        REQUIRE(std::isfinite(d));
        CHECK(std::abs(d) <= 1.0);
        if (std::abs(d - prev) > 1.0) ++jumps;
        prev = d;
    }
    CHECK(jumps == 0);
    CHECK_THROWS_AS(matching_determinant(d1, 0, 0.95), DomainError);
    CHECK_THROWS_AS(matching_determinant(d1, 0, -0.1), DomainError);
}

TEST_CASE("roots match the spline spectrum channel by channel") {
    const LayeredDevice d1 = device_preset("device1");
    const SpectrumTable& t = device_table(1);
    for (int l = 0; l < 10; ++l) {
        const auto roots = find_bound_states(d1, l);
        std::vector<double> spline;
        for (const BoundState& s : t.states)
            if (s.l == l) spline.push_back(s.energy);
        REQUIRE(roots.energies.size() == spline.size());
        for (std::size_t i = 0; i < spline.size(); ++i) CHECK(std::abs(roots.energies[i] - spline[i]) < 1e-6);
        CHECK(find_bound_states(d1, l, 1e-5).energies.size() == roots.energies.size());
    }
    CHECK(find_bound_states(d1, 20).energies.empty());
}

TEST_CASE("interface continuity and normalization") {
    const LayeredDevice d2 = device_preset("device2");
    for (int l : {0, 1, 2}) {
        const auto roots = find_bound_states(d2, l);
        for (double e : roots.energies) {
            const ChannelSolution sol = channel_solution(d2, l, e);
            CHECK(sol.interface_residual() < 1e-10);
            CHECK(sol.shells.front().b == 0.0);
            CHECK(sol.shells.back().a == 0.0);
        }
    }
    const auto sol = channel_solution(d2, 0, find_bound_states(d2, 0).energies[0]);
    double sum = 0;
    const int n = 200000;
    const double h = 40.0 / n;
    for (int i = 1; i < n; ++i) sum += std::pow(sol.reduced(i * h), 2) * h;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("solutions are invariant under coefficient rescaling") {
    const LayeredDevice d1 = device_preset("device1");
    const auto roots = find_bound_states(d1, 1);
    REQUIRE(!roots.energies.empty());
    const ChannelSolution sol = channel_solution(d1, 1, roots.energies[0]);
    ChannelSolution scaled = sol;
    for (auto& sh : scaled.shells) {
        sh.a *= 1e7;
        sh.b *= 1e7;
    }
    scaled.norm *= 1e7;
    CHECK(scaled.interface_residual() == doctest::Approx(sol.interface_residual()).epsilon(1e-3));
    for (double r : {0.5, 1.5, 3.0, 6.0, 9.0}) CHECK(scaled.reduced(r) == doctest::Approx(sol.reduced(r)).epsilon(1e-13));
    CHECK(std::abs(matching_determinant(d1, 1, roots.energies[0])) < 1e-6);
}

TEST_CASE("oracle report") {
    const LayeredDevice d1 = device_preset("device1");
    const OracleReport r = oracle_check(d1, device_table(1));
    CHECK(r.rows.size() == device_table(1).states.size());
    CHECK(r.max_abs_diff() < 1e-6);
}

TEST_CASE("close root pairs are reported") {
    for (double rc : {4.0, 6.0}) {
        const LayeredDevice dev = fig2_device(rc);
        for (int l = 0; l <= 3; ++l) {
            const auto roots = find_bound_states(dev, l);
            std::size_t close = 0;
            for (std::size_t i = 1; i < roots.energies.size(); ++i)
                close += roots.energies[i] - roots.energies[i - 1] < 1e-6;
            CHECK(close == roots.warnings.size());
        }
    }
}

TEST_CASE("exact states reproduce the qubit coupling") {
    const LayeredDevice d1 = device_preset("device1");
    const DipoleMatrix& ref = device_dipole(1);
    const BoundState& s1 = ref.states[ref.q1];
    const BoundState& s2 = ref.states[ref.q2];
    std::vector<BoundState> exact;
    for (const BoundState* s : {&s1, &s2}) {
        const double e = find_bound_states(d1, s->l).energies.at(s->n_r);
        exact.push_back(to_bound_state(channel_solution(d1, s->l, e), s->n_r, s->basis, d1));
    }
    const DipoleMatrix dm = build_dipole(exact, ref.units);
    CHECK(std::abs(dm.coupling()) == doctest::Approx(std::abs(ref.coupling())).epsilon(1e-6));
    CHECK(dm.states[dm.q1].p_inner == doctest::Approx(s1.p_inner).epsilon(1e-6));
}

}
