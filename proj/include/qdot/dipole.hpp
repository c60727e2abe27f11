#pragma once

// Dipole couplings Z_kn = <k| z |n> and transition frequencies over a set
// of bound states (m = 0 sector).

#include <vector>

#include <Eigen/Core>

#include "qdot/spectral.hpp"
#include "qdot/units.hpp"

namespace qdot {

/// <l+1, 0| cos(theta) |l, 0> = (l+1)/sqrt((2l+1)(2l+3)).
double angular_factor(int l);

/// int u_a(r) r u_b(r) dr on the shared quadrature rule. Throws
/// ConfigError when the two states live on different bases.
double radial_moment(const BoundState& a, const BoundState& b);

struct DipoleMatrix {
    std::vector<BoundState> states;  // sorted by (l, n_r)
    Eigen::MatrixXd z;               // length
    Eigen::MatrixXd omega;           // omega(k, n) = (E_k - E_n)/hbar
    int q1 = -1;
    int q2 = -1;
    UnitSystem units = kSemiconductorUnits;

    Eigen::Index size() const { return Eigen::Index(states.size()); }
    double coupling() const { return z(q1, q2); }
};

/// Z_kn = angular_factor(min(l_k, l_n)) * radial_moment(k, n) for
/// |l_k - l_n| = 1, zero otherwise. q1 is the lowest state with l = 0 and
/// P_inner > threshold, q2 the lowest such state with l = 1. Throws
/// NoQubitError when either is missing.
DipoleMatrix build_dipole(std::vector<BoundState> states, const UnitSystem& units, double threshold = 0.5);

/// Convenience: every bound state of a spectrum table.
DipoleMatrix build_dipole(const SpectrumTable& table, double threshold = 0.5);

}  // namespace qdot
