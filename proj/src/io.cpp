#include "qdot/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "qdot/error.hpp"

#ifndef QDOT_VERSION
#define QDOT_VERSION "unknown"
#endif

namespace qdot {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

namespace {

std::string label(const BoundState& s) { return "l" + std::to_string(s.l) + "_n" + std::to_string(s.n_r); }

}  // namespace

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumTable>& tables) {
    std::vector<const SpectrumTable*> order;
    for (const auto& t : tables) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(),
                     [](const SpectrumTable* a, const SpectrumTable* b) { return a->sweep_param < b->sweep_param; });
    os << "sweep_param,l,n_r,E,P_inner\n";
    for (const SpectrumTable* t : order) {
        std::vector<const BoundState*> states;
        for (const auto& s : t->states) states.push_back(&s);
        std::stable_sort(states.begin(), states.end(), [](const BoundState* a, const BoundState* b) {
            return a->l != b->l ? a->l < b->l : a->n_r < b->n_r;
        });
        for (const BoundState* s : states)
            os << format_number(t->sweep_param) << ',' << s->l << ',' << s->n_r << ',' << format_number(s->energy) << ','
               << format_number(s->p_inner) << '\n';
    }
}

void write_density_csv(std::ostream& os, const SpectrumTable& table, int samples) {
    if (samples < 2) throw InvalidParameter("density grid needs at least two samples");
    os << "r";
    for (const auto& s : table.states) os << ",u2_" << label(s);
    os << '\n';
    const double cutoff = table.basis.cutoff;
    for (int i = 0; i < samples; ++i) {
        const double r = cutoff * double(i) / double(samples - 1);
        os << format_number(r);
        for (const auto& s : table.states) {
            const double u = s.basis->evaluate(s.coeffs, r);
            os << ',' << format_number(u * u);
        }
        os << '\n';
    }
}

void write_oracle_csv(std::ostream& os, const OracleReport& report, double sweep_param) {
    os << "sweep_param,l,n_r,E_spectral,E_analytic,dE\n";
    for (const OracleRow& r : report.rows)
        os << format_number(sweep_param) << ',' << r.l << ',' << r.n_r << ',' << format_number(r.spectral) << ','
           << format_number(r.analytic) << ',' << format_number(r.spectral - r.analytic) << '\n';
}

void write_dipole_csv(std::ostream& os, const DipoleMatrix& dm) {
    os << "k,n,l_k,n_r_k,l_n,n_r_n,Z,omega\n";
    for (Eigen::Index k = 0; k < dm.size(); ++k)
        for (Eigen::Index n = 0; n < dm.size(); ++n) {
            const BoundState& a = dm.states[k];
            const BoundState& b = dm.states[n];
            os << k << ',' << n << ',' << a.l << ',' << a.n_r << ',' << b.l << ',' << b.n_r << ','
               << format_number(dm.z(k, n)) << ',' << format_number(dm.omega(k, n)) << '\n';
        }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,pop_q1,pop_q2,leakage,norm_deficit\n";
    for (std::size_t i = 0; i < traj.size(); ++i)
        os << format_number(traj.times[i]) << ',' << format_number(traj.population(i, traj.q1)) << ','
           << format_number(traj.population(i, traj.q2)) << ',' << format_number(traj.leakage[i]) << ','
           << format_number(traj.norm_deficit[i]) << '\n';
}

void write_strength_csv(std::ostream& os, const std::vector<StrengthRow>& rows) {
    os << "A0,L_p\n";
    for (const auto& r : rows) os << format_number(r.amplitude) << ',' << format_number(r.leakage) << '\n';
}

void write_detuning_csv(std::ostream& os, const std::vector<DetuningRow>& rows) {
    os << "omega_rel,L_p,L_p_rel\n";
    for (const auto& r : rows)
        os << format_number(r.omega_rel) << ',' << format_number(r.leakage) << ',' << format_number(r.normalized)
           << '\n';
}

void write_v0_csv(std::ostream& os, double amplitude, const std::vector<V0Row>& rows, bool header) {
    if (header) os << "A0,V0,L_p,omega_res,n_inner\n";
    for (const auto& r : rows)
        os << format_number(amplitude) << ',' << format_number(r.v0) << ',' << format_number(r.leakage) << ','
           << format_number(r.omega_res) << ',' << r.inner_states << '\n';
}

std::string version_string() { return QDOT_VERSION; }

nlohmann::json to_json(const RunManifest& m) {
    return {{"command", m.command},   {"version", m.version},       {"wall_time_s", m.wall_time},
            {"outputs", m.outputs},   {"parameters", m.parameters}, {"config", m.config_snapshot}};
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << to_json(m).dump(2) << '\n';
}

}  // namespace qdot
