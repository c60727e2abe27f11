#pragma once

// Run configuration: a small sectioned key = value format.
//
//   # comment
//   [device]
//   preset = device1
//   [drive]
//   a0_meV_per_nm = 0.27
//   [sweep.strength]
//   a0_meV_per_nm = logspace(1, 50, 11)
//
// Values are numbers, quoted or bare strings, booleans, lists [a, b, ...],
// linspace(a, b, n) or logspace(a, b, n). Every dimensioned key carries a
// unit suffix; see docs/config.md for the full key table.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qdot/model.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

enum class SweepKind { strength, detuning, v0 };

/// Fully resolved configuration. Dimensioned quantities are stored in
/// semiconductor units (nm, eV, fs, eV/nm) regardless of how they were
/// written; use the accessors below to get them in the device's own units.
struct RunConfig {
    // [device]
    std::string preset = "device1";  // device1 | device2 | fig2 | layered | expsine
    double rc = 1.0;
    std::vector<double> radii;       // finite shell radii of a custom layered device
    std::vector<double> potentials;  // one per shell, including the cladding
    std::vector<double> masses;
    double v0 = hartree_to_ev(2.0);
    double gamma = 0.1 / kBohrInNm;  // 1/nm
    double omega_p = 1.0 / kBohrInNm;

    // [basis]; unset fields use the device default
    std::optional<double> cutoff;
    std::optional<int> intervals;
    int order = 5;
    int quad_nodes = 0;

    // [spectrum]
    int l_max = 40;
    EigenMethod method = EigenMethod::dense;
    double rc_min = 0.4;
    double rc_max = 8.0;
    int rc_steps = 0;  // 0: single device, no sweep
    double knot_spacing = 0.01;
    double tail = 10.0;
    bool densities = false;

    // [drive]
    double a0 = 0.27e-3;             // eV/nm
    double omega_rel = 1.0;
    std::optional<double> t_max;     // fs
    std::optional<double> stride;    // fs
    int steps_per_period = 200;

    // [sweep]
    SweepKind sweep = SweepKind::strength;
    int jobs = 1;
    std::vector<double> strength_a0;  // eV/nm
    double detuning_a0 = 25e-3;
    std::vector<double> detuning_omega_rel;
    std::vector<double> v0_grid;      // eV
    std::vector<double> v0_a0;        // eV/nm

    // [output]
    std::string out_dir = "out";
    std::string tag = "run";

    RunConfig();

    bool atomic() const { return preset == "expsine"; }
    const UnitSystem& units() const { return atomic() ? kAtomicUnits : kSemiconductorUnits; }

    // conversions from the stored units into the device's units
    double length(double nm) const { return atomic() ? nm_to_bohr(nm) : nm; }
    double energy(double ev) const { return atomic() ? ev_to_hartree(ev) : ev; }
    double field(double ev_per_nm) const;
    double time(double fs) const;
    double inverse_length(double per_nm) const { return atomic() ? per_nm * kBohrInNm : per_nm; }
    // and back
    double from_length(double x) const { return atomic() ? bohr_to_nm(x) : x; }
    double from_energy(double x) const { return atomic() ? hartree_to_ev(x) : x; }
    double from_field(double x) const;
    double from_time(double x) const;

    bool operator==(const RunConfig&) const = default;
};

/// Parses configuration text. `origin` names the source in error messages.
/// Throws ConfigError with line and column for syntax errors and with the
/// offending key for semantic ones.
RunConfig parse_config(std::string_view text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text of a configuration; parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& cfg);

/// Potential described by the [device] section. Throws ConfigError or
/// NotFoundError.
RadialPotential make_potential(const RunConfig& cfg);
RadialPotential make_potential(const RunConfig& cfg, double rc);

/// Basis for the [basis] section, filling unset fields from the device
/// default.
BasisSpec make_basis_spec(const RunConfig& cfg, const RadialPotential& p);

std::string to_string(SweepKind k);

}  // namespace qdot
