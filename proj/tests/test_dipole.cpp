#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "qdot/dipole.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/error.hpp"

using namespace qdot;
using qdot::testing::device_dipole;
using qdot::testing::device_table;
using qdot::testing::flat_device;

namespace {

// Trapezoid integral of u_0 r u_1 for the hard-wall sphere from closed forms.
double hard_wall_moment(double R, double k1) {
    const int n = 400000;
    const double h = R / n;
    auto u0 = [&](double r) { return std::sin(std::numbers::pi * r / R); };
    auto u1 = [&](double r) {
        const double x = k1 * r;
        return x < 1e-8 ? 0.0 : r * (std::sin(x) / (x * x) - std::cos(x) / x);
    };
    double n0 = 0, n1 = 0, m = 0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * h;
        const double w = (i == 0 || i == n) ? 0.5 * h : h;
        n0 += w * u0(r) * u0(r);
        n1 += w * u1(r) * u1(r);
        m += w * u0(r) * r * u1(r);
    }
    return m / std::sqrt(n0 * n1);
}

}  // namespace

TEST_SUITE("dipole") {

TEST_CASE("angular factor") {
    CHECK(angular_factor(0) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(angular_factor(1) == doctest::Approx(2 / std::sqrt(15.0)).epsilon(1e-15));
    CHECK(angular_factor(100000) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("hard-wall radial moment against a trapezoid oracle") {
    const double R = 5.0;
    const RadialPotential p = flat_device(0.13);
    const BasisPtr basis = make_basis(BasisSpec{R, 300, 5, 0}, p);
    const auto s0 = solve_channel(assemble(*basis, p, 0), 1.0, basis, p);
    const auto s1 = solve_channel(assemble(*basis, p, 1), 1.0, basis, p);
    const double oracle = hard_wall_moment(R, 4.493409457909063 / R);
    CHECK(oracle == doctest::Approx(2.650341633375006).epsilon(1e-9));
    CHECK(std::abs(radial_moment(s0[0], s1[0]) - oracle) < 1e-8);
    CHECK(radial_moment(s0[0], s1[0]) == radial_moment(s1[0], s0[0]));
    const double diag = radial_moment(s0[0], s0[0]);
    CHECK(diag == doctest::Approx(R / 2).epsilon(1e-9));
}

TEST_CASE("mismatched bases are rejected") {
    const BoundState& a = device_table(1).states[0];
    const BoundState& b = device_table(2).states[0];
    CHECK_THROWS_AS(radial_moment(a, b), ConfigError);
}

TEST_CASE("device1 dipole matrix") {
    const DipoleMatrix& dm = device_dipole(1);
    CHECK(dm.states[dm.q1].l == 0);
    CHECK(dm.states[dm.q1].n_r == 1);
    CHECK(dm.states[dm.q2].l == 1);
    CHECK(dm.states[dm.q2].n_r == 1);
    CHECK(std::abs(dm.coupling()) > 0);
    for (Eigen::Index k = 0; k < dm.size(); ++k)
        for (Eigen::Index n = 0; n < dm.size(); ++n) {
            CHECK(dm.z(k, n) == dm.z(n, k));
            CHECK(dm.omega(k, n) == -dm.omega(n, k));
            const int dl = std::abs(dm.states[k].l - dm.states[n].l);
            if (dl != 1) CHECK(dm.z(k, n) == 0.0);
            else CHECK(dm.z(k, n) != 0.0);
        }
    CHECK(resonance_frequency(dm) == dm.omega(dm.q2, dm.q1));
    CHECK(resonance_frequency(dm) > 0);
    const DipoleMatrix& d2 = device_dipole(2);
    CHECK(d2.states[d2.q1].l == 0);
    CHECK(d2.states[d2.q2].l == 1);
    CHECK(std::abs(d2.coupling()) > 0);
}

TEST_CASE("qubit needs two inner states") {
    std::vector<BoundState> states;
    for (const BoundState& s : device_table(1).states)
        if (!(s.l == 1 && s.p_inner > 0.5)) states.push_back(s);
    CHECK_THROWS_AS(build_dipole(states, kSemiconductorUnits), NoQubitError);
}

TEST_CASE("coupling is stable under basis refinement") {
    const SpectrumTable fine = solve_spectrum(device_preset("device1"), BasisSpec{16.0, 640, 5, 0});
    const DipoleMatrix dm = build_dipole(fine);
    const double a = device_dipole(1).coupling();
    CHECK(std::abs(dm.coupling() - a) / std::abs(a) < 1e-6);
}

}
