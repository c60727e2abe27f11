#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/error.hpp"

using namespace qdot;
using qdot::testing::device_dipole;
using qdot::testing::device_table;

namespace {

DipoleMatrix two_level(const DipoleMatrix& full) {
    return build_dipole({full.states[full.q1], full.states[full.q2]}, full.units);
}

double slope(const std::vector<StrengthRow>& rows) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(rows.size());
    for (const auto& r : rows) {
        const double x = std::log(r.amplitude), y = std::log(r.leakage);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("no drive, no motion") {
    const DipoleMatrix& dm = device_dipole(1);
    DriveSpec d;
    d.amplitude = 0;
    d.omega = resonance_frequency(dm);
    d.t_max = 50 * d.period();
    const Trajectory t = evolve(dm, d);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(t.population(i, dm.q1) == 1.0);
        CHECK(t.leakage[i] == 0.0);
    }
    CHECK(time_averaged_leakage(t) == 0.0);
}

TEST_CASE("drive validation") {
    const DipoleMatrix& dm = device_dipole(1);
    DriveSpec d;
    d.amplitude = -1;
    d.omega = 1;
    d.t_max = 1;
    CHECK_THROWS_AS(evolve(dm, d), InvalidParameter);
    d.amplitude = 1e-3;
    d.omega = 0;
    CHECK_THROWS_AS(evolve(dm, d), InvalidParameter);
}

TEST_CASE("two-level resonance follows the rotating-wave solution") {
    const DipoleMatrix dm = two_level(device_dipole(1));
    const double a0 = 1e-3;
    const double omega = resonance_frequency(dm);
    REQUIRE(a0 * std::abs(dm.coupling()) / (dm.units.hbar * omega) < 0.02);
    DriveSpec d = default_drive(dm, a0);
    d.t_max = rwa_period(dm, a0);
    const Trajectory t = evolve(dm, d);
    double worst = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double rwa = std::pow(std::cos(a0 * std::abs(dm.coupling()) * t.times[i] / (2 * dm.units.hbar)), 2);
        worst = std::max(worst, std::abs(t.population(i, dm.q1) - rwa));
    }
    CHECK(worst < 0.01);
}

TEST_CASE("time-averaged leakage") {
    Trajectory t;
    for (int i = 0; i <= 10; ++i) {
        t.times.push_back(0.5 * i);
        t.leakage.push_back(0.25);
    }
    CHECK(time_averaged_leakage(t) == doctest::Approx(0.25));
    CHECK(time_averaged_leakage(t, 1.0, 3.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(time_averaged_leakage(t, 2.1, 2.2), InvalidParameter);
    CHECK_THROWS_AS(time_averaged_leakage(t, 3.0, 1.0), InvalidParameter);
}

TEST_CASE("populations are gauge invariant") {
    const DipoleMatrix& dm = device_dipole(1);
    std::vector<BoundState> shifted = dm.states;
    for (auto& s : shifted) s.energy += 0.37;
    const DipoleMatrix moved = build_dipole(shifted, dm.units);
    const DriveSpec d = default_drive(dm, 25e-3);
    const Trajectory a = evolve(dm, d), b = evolve(moved, d);
    REQUIRE(a.size() == b.size());
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (Eigen::Index k = 0; k < dm.size(); ++k)
            worst = std::max(worst, std::abs(a.population(i, int(k)) - b.population(i, int(k))));
    CHECK(worst < 1e-10);
}

TEST_CASE("norm conservation and fourth-order convergence") {
    const DipoleMatrix& dm = device_dipole(1);
    DriveSpec d = default_drive(dm, 25e-3);
    const Trajectory t200 = evolve(dm, d);
    d.steps_per_period = 400;
    const Trajectory t400 = evolve(dm, d);
    d.steps_per_period = 1600;
    const Trajectory ref = evolve(dm, d);
    CHECK(t200.max_norm_deficit() < 1e-8);
    CHECK(t200.max_norm_deficit() / t400.max_norm_deficit() > 8);
    const std::size_t mid = t200.size() / 2;
    REQUIRE(t400.times[mid] == t200.times[mid]);
    REQUIRE(ref.times[mid] == t200.times[mid]);
    const double e200 = (t200.coeffs[mid] - ref.coeffs[mid]).norm();
    const double e400 = (t400.coeffs[mid] - ref.coeffs[mid]).norm();
    CHECK(e200 / e400 == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("integrating back returns the initial state") {
    const DipoleMatrix& dm = device_dipole(1);
    const DriveSpec d = default_drive(dm, 25e-3);
    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(dm.size());
    c0[dm.q1] = 1;
    const Eigen::VectorXcd c1 = propagate(dm, d, c0, 0, d.t_max);
    const Eigen::VectorXcd c2 = propagate(dm, d, c1, d.t_max, 0);
    CHECK(std::norm(c0.dot(c2)) > 1 - 1e-6);
}

TEST_CASE("norm gate trips on a coarse step") {
    const DipoleMatrix& dm = device_dipole(2);
    DriveSpec d = default_drive(dm, 0.5);
    d.steps_per_period = 4;
    CHECK_THROWS_AS(evolve(dm, d), IntegratorError);
}

TEST_CASE("leakage stays in [0, 1]") {
    const DipoleMatrix& dm = device_dipole(2);
    const Trajectory t = evolve(dm, default_drive(dm, 50e-3));
    for (double l : t.leakage) {
        CHECK(l >= 0.0);
        CHECK(l <= 1.0);
    }
}

TEST_CASE("dropping the top tenth of the states barely moves device1 leakage") {
    const DipoleMatrix& dm = device_dipole(1);
    std::vector<BoundState> kept = dm.states;
    std::sort(kept.begin(), kept.end(), [](const BoundState& a, const BoundState& b) { return a.energy < b.energy; });
    kept.resize(kept.size() - std::max<std::size_t>(1, kept.size() / 10));
    const DipoleMatrix small = build_dipole(kept, dm.units);
    const double a = time_averaged_leakage(evolve(dm, default_drive(dm, 25e-3)));
    const double b = time_averaged_leakage(evolve(small, default_drive(small, 25e-3)));
    CHECK(std::abs(b - a) / a < 0.05);
}

TEST_CASE("quadratic scaling survives a global coupling rescale") {
    DipoleMatrix dm = device_dipole(1);
    const std::vector<double> grid{1e-3, 3e-3, 1e-2};
    const double s = slope(leakage_vs_strength(dm, grid));
    dm.z *= 0.5;
    const double half = slope(leakage_vs_strength(dm, grid));
    CHECK(s == doctest::Approx(2.0).epsilon(0.05));
    CHECK(half == doctest::Approx(2.0).epsilon(0.05));
    CHECK(leakage_vs_strength(dm, {5e-3}).size() == 1);
}

TEST_CASE("sweeps are independent of the worker count") {
    const DipoleMatrix& dm = device_dipole(1);
    const std::vector<double> grid{2e-3, 5e-3, 1e-2};
    const auto a = leakage_vs_strength(dm, grid, 1);
    const auto b = leakage_vs_strength(dm, grid, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a[i].leakage == b[i].leakage);
    const auto da = detuning_sweep(dm, 25e-3, {0.9, 1.0, 1.1}, 2);
    CHECK(da[1].normalized == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exp-sine resonance is continuous across the critical depth") {
    const ExpSinePotential fam{};
    const auto rows = v0_leakage_sweep(fam, {2.06, 2.11}, 1e-2, default_basis(fam));
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(rows[i].omega_res - rows[i - 1].omega_res) < 0.01);
    CHECK(rows.front().inner_states == 2);
    CHECK(rows.back().inner_states == 3);
}

}
