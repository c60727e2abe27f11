#pragma once

// Exact bound states of piecewise-constant layered devices by matching
// spherical Bessel solutions across the shells. Independent of the
// B-spline solver, which it is used to check.

#include <string>
#include <vector>

#include "qdot/bessel.hpp"
#include "qdot/model.hpp"
#include "qdot/spectral.hpp"

namespace qdot {

/// R(r) = a f_l(q r) + b g_l(q r) inside one shell, with (f, g) = (j, y)
/// where E > V and (i, k) where E < V.
struct ShellSolution {
    double inner_radius;
    double outer_radius;
    double wavenumber;  // k or kappa
    bool evanescent;
    double a;
    double b;
    double mass;
};

struct ChannelSolution {
    int l = 0;
    double energy = 0;
    std::vector<ShellSolution> shells;
    double norm = 1;  // u is divided by this so that int u^2 dr = 1

    /// Radial function R(r) and its derivative.
    double radial(double r) const;
    double radial_derivative(double r) const;
    /// u(r) = r R(r), normalized.
    double reduced(double r) const { return r * radial(r) / norm; }

    /// Largest relative mismatch of R and R'/m over all interfaces.
    double interface_residual() const;
};

/// Signed measure of the growing component in the cladding after chaining
/// the interface conditions (continuity of R and R'/m) from the regular
/// solution at the origin. Zero exactly at bound-state energies; bounded
/// in [-1, 1]. Requires min V < E < V_inf.
double matching_determinant(const LayeredDevice& device, int l, double energy);

/// Builds the full shell-by-shell solution at `energy` (normalized when the
/// energy is a bound state).
ChannelSolution channel_solution(const LayeredDevice& device, int l, double energy);

struct AnalyticRoots {
    std::vector<double> energies;
    std::vector<std::string> warnings;
};

/// Roots of matching_determinant in (min V, V_inf): a uniform scan with the
/// given resolution, then bisection down to the last representable bracket. Throws SolverError
/// when a root sits on the scan boundary.
AnalyticRoots find_bound_states(const LayeredDevice& device, int l, double resolution = 2e-5);

/// Samples a normalized channel solution on the quadrature nodes of
/// `basis` so it can feed the dipole builder.
BoundState to_bound_state(const ChannelSolution& sol, int n_r, const BasisPtr& basis, const RadialPotential& p);

struct OracleRow {
    int l;
    int n_r;
    double spectral;  // NaN when the spline solver has no such state
    double analytic;  // NaN when the matching solver has no such state
};

struct OracleReport {
    std::vector<OracleRow> rows;  // sorted by (l, n_r)
    std::vector<std::string> warnings;

    /// Largest |E_spectral - E_analytic|; infinite if the state sets differ.
    double max_abs_diff() const;
};

/// Runs the matching solver on every channel up to the first empty one
/// and pairs its roots with the spline spectrum of the same device.
OracleReport oracle_check(const LayeredDevice& device, const SpectrumTable& table, double resolution = 2e-5);

}  // namespace qdot
