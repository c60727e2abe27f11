#include "qdot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <utility>

#include "qdot/error.hpp"
#include "qdot/parallel.hpp"

namespace qdot {

namespace {

using cd = std::complex<double>;

// Right-hand side in the interaction picture. Energies are taken relative
// to a reference so that the phases stay small.
class Rhs {
public:
    Rhs(const DipoleMatrix& dm, const DriveSpec& drive) : z_(dm.z.cast<cd>()), energy_(dm.size()) {
        const double ref = dm.states[dm.q1].energy;
        for (Eigen::Index k = 0; k < dm.size(); ++k) energy_[k] = (dm.states[k].energy - ref) / dm.units.hbar;
        coupling_ = drive.amplitude / dm.units.hbar;
        omega_ = drive.omega;
    }

    Eigen::VectorXcd operator()(double t, const Eigen::VectorXcd& c) const {
        const Eigen::ArrayXcd phase = (cd(0, 1) * t * energy_).exp();
        const Eigen::VectorXcd rotated = (phase.conjugate() * c.array()).matrix();
        const cd f = cd(0, -1) * coupling_ * std::cos(omega_ * t);
        return (f * phase * (z_ * rotated).array()).matrix();
    }

private:
    Eigen::MatrixXcd z_;
    Eigen::ArrayXd energy_;
    double coupling_ = 0;
    double omega_ = 0;
};

void rk4_step(const Rhs& f, double t, double dt, Eigen::VectorXcd& c) {
    const Eigen::VectorXcd k1 = f(t, c);
    const Eigen::VectorXcd k2 = f(t + 0.5 * dt, c + 0.5 * dt * k1);
    const Eigen::VectorXcd k3 = f(t + 0.5 * dt, c + 0.5 * dt * k2);
    const Eigen::VectorXcd k4 = f(t + dt, c + dt * k3);
    c += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void norm_failure(double deficit, double t, double dt) {
    std::ostringstream os;
    os.precision(3);
    os << "norm deficit " << deficit << " at t = " << t << " with dt = " << dt
       << "; halve dt (double steps_per_period)";
    throw IntegratorError(os.str());
}

double leakage_of(const Eigen::VectorXcd& c, int q1, int q2) {
    return std::clamp(1.0 - std::norm(c[q1]) - std::norm(c[q2]), 0.0, 1.0);
}

}  // namespace

double DriveSpec::period() const { return 2 * std::numbers::pi / omega; }

void DriveSpec::validate() const {
    if (!(amplitude >= 0)) throw InvalidParameter("drive amplitude must be non-negative");
    if (!(omega > 0)) throw InvalidParameter("drive frequency must be positive");
    if (!(t_max > 0)) throw InvalidParameter("t_max must be positive");
    if (steps_per_period < 1) throw InvalidParameter("steps_per_period must be positive");
    if (stride < 0) throw InvalidParameter("recorder stride must be non-negative");
}

double Trajectory::max_norm_deficit() const {
    double m = 0;
    for (double d : norm_deficit) m = std::max(m, d);
    return m;
}

Eigen::VectorXcd propagate(const DipoleMatrix& dm, const DriveSpec& drive, Eigen::VectorXcd c, double t0, double t1) {
    drive.validate();
    const Rhs f(dm, drive);
    const double span = t1 - t0;
    const long steps = std::max(1L, std::lround(std::abs(span) / drive.dt()));
    const double dt = span / double(steps);
    const double n0 = c.squaredNorm();
    for (long s = 0; s < steps; ++s) {
        const double t = t0 + dt * double(s);
        rk4_step(f, t, dt, c);
        const double deficit = std::abs(n0 - c.squaredNorm());
        if (deficit > drive.norm_tolerance) norm_failure(deficit, t + dt, dt);
    }
    return c;
}

Trajectory evolve(const DipoleMatrix& dm, const DriveSpec& drive) {
    drive.validate();
    const int start = drive.initial.value_or(dm.q1);
    if (start < 0 || start >= dm.size()) throw InvalidParameter("initial state index out of range");

    const Rhs f(dm, drive);
    const double dt = drive.dt();
    const long steps = std::max(1L, std::lround(drive.t_max / dt));
    const double stride = drive.stride > 0 ? drive.stride : drive.period() / 20;
    const long every = std::max(1L, std::lround(stride / dt));

    Trajectory traj;
    traj.q1 = dm.q1;
    traj.q2 = dm.q2;
    traj.dt = dt;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dm.size());
    c[start] = 1;
    auto record = [&](double t, double deficit) {
        traj.times.push_back(t);
        traj.coeffs.push_back(c);
        traj.leakage.push_back(leakage_of(c, dm.q1, dm.q2));
        traj.norm_deficit.push_back(deficit);
    };
    record(0.0, 0.0);
    for (long s = 1; s <= steps; ++s) {
        const double t = dt * double(s - 1);
        rk4_step(f, t, dt, c);
        const double deficit = std::abs(1.0 - c.squaredNorm());
        if (deficit > drive.norm_tolerance) norm_failure(deficit, t + dt, dt);
        if (s % every == 0 || s == steps) record(dt * double(s), deficit);
    }
    return traj;
}

double resonance_frequency(const DipoleMatrix& dm) {
    if (dm.q1 < 0 || dm.q2 < 0) throw NoQubitError("dipole matrix has no qubit");
    return dm.omega(dm.q2, dm.q1);
}

double rwa_period(const DipoleMatrix& dm, double amplitude) {
    return 2 * std::numbers::pi * dm.units.hbar / (amplitude * std::abs(dm.coupling()));
}

DriveSpec default_drive(const DipoleMatrix& dm, double amplitude, double omega_rel) {
    DriveSpec d;
    d.amplitude = amplitude;
    d.omega = omega_rel * resonance_frequency(dm);
    d.t_max = 4 * rwa_period(dm, amplitude);
    return d;
}

double time_averaged_leakage(const Trajectory& traj, double t0, double t1) {
    double area = 0, first = 0, last = 0;
    int samples = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t < t0 || t > t1) continue;
        if (samples == 0) {
            first = t;
        } else {
            area += 0.5 * (t - last) * (traj.leakage[i] + traj.leakage[i - 1]);
        }
        last = t;
        ++samples;
    }
    if (samples < 2 || !(last > first)) throw InvalidParameter("averaging window holds fewer than two samples");
    return area / (last - first);
}

double time_averaged_leakage(const Trajectory& traj) {
    if (traj.size() < 2) throw InvalidParameter("trajectory holds fewer than two samples");
    return time_averaged_leakage(traj, traj.times.front(), traj.times.back());
}

std::vector<StrengthRow> leakage_vs_strength(const DipoleMatrix& dm, const std::vector<double>& amplitudes, int jobs,
                                             int steps_per_period) {
    for (double a : amplitudes)
        if (!(a > 0)) throw InvalidParameter("strength grid must be positive");
    return parallel_map(amplitudes.size(), jobs, [&](std::size_t i) {
        DriveSpec d = default_drive(dm, amplitudes[i]);
        d.steps_per_period = steps_per_period;
        const Trajectory t = evolve(dm, d);
        return StrengthRow{amplitudes[i], time_averaged_leakage(t), t.max_norm_deficit()};
    });
}

std::vector<DetuningRow> detuning_sweep(const DipoleMatrix& dm, double amplitude, const std::vector<double>& omega_rel,
                                        int jobs, int steps_per_period) {
    for (double w : omega_rel)
        if (!(w > 0)) throw InvalidParameter("detuning grid must be positive");
    const double horizon = default_drive(dm, amplitude).t_max;
    // index 0 is the resonant reference
    std::vector<double> rel{1.0};
    rel.insert(rel.end(), omega_rel.begin(), omega_rel.end());
    const auto runs = parallel_map(rel.size(), jobs, [&](std::size_t i) {
        DriveSpec d = default_drive(dm, amplitude, rel[i]);
        d.t_max = horizon;
        d.steps_per_period = steps_per_period;
        const Trajectory t = evolve(dm, d);
        return std::pair{time_averaged_leakage(t), t.max_norm_deficit()};
    });
    std::vector<DetuningRow> out;
    for (std::size_t i = 1; i < rel.size(); ++i)
        out.push_back({rel[i], runs[i].first, runs[i].first / runs[0].first, runs[i].second});
    return out;
}

std::vector<V0Row> v0_leakage_sweep(const ExpSinePotential& family, const std::vector<double>& v0_grid,
                                    double amplitude, const BasisSpec& spec, int jobs, int steps_per_period) {
    if (!(amplitude > 0)) throw InvalidParameter("drive amplitude must be positive");
    return parallel_map(v0_grid.size(), jobs, [&](std::size_t i) {
        ExpSinePotential p = family;
        p.v0 = v0_grid[i];
        SpectrumOptions opts;
        opts.solve.method = EigenMethod::banded;
        const SpectrumTable table = solve_spectrum(p, spec, opts);
        const DipoleMatrix dm = build_dipole(table);
        DriveSpec d = default_drive(dm, amplitude);
        d.steps_per_period = steps_per_period;
        const Trajectory t = evolve(dm, d);
        return V0Row{p.v0, time_averaged_leakage(t), resonance_frequency(dm), table.count_localized(),
                     t.max_norm_deficit()};
    });
}

}  // namespace qdot
