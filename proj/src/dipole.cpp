#include "qdot/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "qdot/error.hpp"

namespace qdot {

double angular_factor(int l) {
    if (l < 0) throw InvalidParameter("angular momentum must be non-negative");
    return (l + 1.0) / std::sqrt((2.0 * l + 1.0) * (2.0 * l + 3.0));
}

double radial_moment(const BoundState& a, const BoundState& b) {
    if (!a.basis || !b.basis) throw ConfigError("bound state carries no basis");
    if (a.basis != b.basis && !(*a.basis == *b.basis))
        throw ConfigError("radial_moment: states come from different bases");
    const auto& quad = a.basis->quadrature();
    if (a.u_nodes.size() != quad.size() || b.u_nodes.size() != quad.size())
        throw ConfigError("radial_moment: state samples do not match the basis quadrature");
    return (quad.weights * quad.nodes * a.u_nodes.array() * b.u_nodes.array()).sum();
}

DipoleMatrix build_dipole(std::vector<BoundState> states, const UnitSystem& units, double threshold) {
    std::sort(states.begin(), states.end(),
              [](const BoundState& x, const BoundState& y) { return std::tie(x.l, x.n_r) < std::tie(y.l, y.n_r); });
    DipoleMatrix dm;
    dm.units = units;
    const Eigen::Index n = Eigen::Index(states.size());
    dm.z = Eigen::MatrixXd::Zero(n, n);
    dm.omega = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const int lk = states[k].l, lj = states[j].l;
            if (std::abs(lk - lj) == 1) {
                const double v = angular_factor(std::min(lk, lj)) * radial_moment(states[k], states[j]);
                dm.z(k, j) = v;
                dm.z(j, k) = v;
            }
            const double w = (states[k].energy - states[j].energy) / units.hbar;
            dm.omega(k, j) = w;
            dm.omega(j, k) = -w;
        }
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const BoundState& s = states[k];
        if (!(s.p_inner > threshold)) continue;
        if (s.l == 0 && (dm.q1 < 0 || s.energy < states[dm.q1].energy)) dm.q1 = int(k);
        if (s.l == 1 && (dm.q2 < 0 || s.energy < states[dm.q2].energy)) dm.q2 = int(k);
    }
    if (dm.q1 < 0 || dm.q2 < 0)
        throw NoQubitError("no qubit: need inner-localized l=0 and l=1 states");
    dm.states = std::move(states);
    return dm;
}

DipoleMatrix build_dipole(const SpectrumTable& table, double threshold) {
    return build_dipole(table.states, unit_system(table.potential), threshold);
}

}  // namespace qdot
