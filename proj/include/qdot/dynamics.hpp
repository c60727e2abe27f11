#pragma once

// Driven coefficient dynamics over the bound-state set:
//   i hbar dc_k/dt = A0 cos(w t) sum_n Z_kn exp(i w_kn t) c_n
// integrated with fixed-step RK4, plus leakage measures and sweeps.

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qdot/dipole.hpp"
#include "qdot/model.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

struct DriveSpec {
    double amplitude = 0;         // A0, energy/length
    double omega = 0;             // angular frequency, 1/time
    std::optional<int> initial;   // state index; q1 when unset
    double t_max = 0;
    double stride = 0;            // recorder stride; 0 selects T_drive/20
    int steps_per_period = 200;   // dt = T_drive / steps_per_period
    double norm_tolerance = 1e-6;

    double period() const;
    double dt() const { return period() / steps_per_period; }
    /// Throws InvalidParameter unless A0 >= 0, omega > 0, t_max > 0.
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> coeffs;
    std::vector<double> leakage;       // 1 - |c_q1|^2 - |c_q2|^2
    std::vector<double> norm_deficit;  // |1 - sum |c_k|^2|
    int q1 = -1;
    int q2 = -1;
    double dt = 0;

    std::size_t size() const { return times.size(); }
    double population(std::size_t sample, int state) const { return std::norm(coeffs[sample][state]); }
    double max_norm_deficit() const;
};

/// Integrates from c(0) = e_initial to drive.t_max, recording at the
/// stride. Throws IntegratorError when the norm deficit of any step
/// exceeds drive.norm_tolerance.
Trajectory evolve(const DipoleMatrix& dm, const DriveSpec& drive);

/// Propagates c from t0 to t1 (t1 < t0 integrates backwards) with the
/// step size of `drive`.
Eigen::VectorXcd propagate(const DipoleMatrix& dm, const DriveSpec& drive, Eigen::VectorXcd c, double t0, double t1);

/// (E_q2 - E_q1)/hbar.
double resonance_frequency(const DipoleMatrix& dm);

/// Two-level Rabi period 2 pi hbar / (A0 |Z_q1q2|).
double rwa_period(const DipoleMatrix& dm, double amplitude);

/// Drive at omega_rel * omega_res over 4 RWA periods.
DriveSpec default_drive(const DipoleMatrix& dm, double amplitude, double omega_rel = 1.0);

/// Trapezoid average of the instantaneous leakage over [t0, t1]. Throws
/// InvalidParameter when the window holds fewer than two samples.
double time_averaged_leakage(const Trajectory& traj, double t0, double t1);
double time_averaged_leakage(const Trajectory& traj);

struct StrengthRow {
    double amplitude;
    double leakage;
    double norm_deficit;  // largest over the run
};

struct DetuningRow {
    double omega_rel;
    double leakage;
    double normalized;  // leakage / leakage at resonance
    double norm_deficit;
};

struct V0Row {
    double v0;
    double leakage;
    double omega_res;
    int inner_states;
    double norm_deficit;
};

/// L_p on resonance for each A0; horizon and window per default_drive.
std::vector<StrengthRow> leakage_vs_strength(const DipoleMatrix& dm, const std::vector<double>& amplitudes,
                                             int jobs = 1, int steps_per_period = 200);

/// L_p at omega_rel * omega_res, normalized to the resonant value. The
/// horizon is the resonant one for every point.
std::vector<DetuningRow> detuning_sweep(const DipoleMatrix& dm, double amplitude,
                                        const std::vector<double>& omega_rel, int jobs = 1,
                                        int steps_per_period = 200);

/// For each v0 of the exp-sine family: spectrum, qubit, and resonant L_p.
std::vector<V0Row> v0_leakage_sweep(const ExpSinePotential& family, const std::vector<double>& v0_grid,
                                    double amplitude, const BasisSpec& spec, int jobs = 1,
                                    int steps_per_period = 200);

}  // namespace qdot
