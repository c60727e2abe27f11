#pragma once

// CSV tables and the JSON run manifest. Every float is written with
// "%.11e" (12 significant digits).

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdot/analytic.hpp"
#include "qdot/dipole.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

std::string format_number(double x);

/// sweep_param,l,n_r,E,P_inner; rows ordered by (sweep_param, l, n_r).
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumTable>& tables);
/// r followed by u^2 of every state, on `samples` equidistant radii.
void write_density_csv(std::ostream& os, const SpectrumTable& table, int samples = 801);
void write_oracle_csv(std::ostream& os, const OracleReport& report, double sweep_param);
/// k,n,l_k,n_r_k,l_n,n_r_n,Z,omega over all pairs.
void write_dipole_csv(std::ostream& os, const DipoleMatrix& dm);
/// t,pop_q1,pop_q2,leakage,norm_deficit
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_strength_csv(std::ostream& os, const std::vector<StrengthRow>& rows);
void write_detuning_csv(std::ostream& os, const std::vector<DetuningRow>& rows);
void write_v0_csv(std::ostream& os, double amplitude, const std::vector<V0Row>& rows, bool header = true);

struct RunManifest {
    std::string command;
    std::string config_snapshot;
    std::string version;
    double wall_time = 0;  // seconds
    std::vector<std::string> outputs;
    nlohmann::json parameters = nlohmann::json::object();
};

/// git describe of the source tree at build time.
std::string version_string();

nlohmann::json to_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace qdot
