#include "qdot/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qdot/error.hpp"
#include "qdot/splines.hpp"

namespace qdot {

namespace {

struct ShellFunctions {
    double f, g, fp, gp;  // regular/irregular solutions and their r-derivatives
};

ShellFunctions shell_functions(int l, double q, bool evanescent, double r) {
    if (q == 0) {
        return {std::pow(r, l), std::pow(r, -l - 1), l == 0 ? 0.0 : l * std::pow(r, l - 1),
                -(l + 1) * std::pow(r, -l - 2)};
    }
    const BesselKind fk = evanescent ? BesselKind::i : BesselKind::j;
    const BesselKind gk = evanescent ? BesselKind::k : BesselKind::y;
    const double x = q * r;
    return {spherical_bessel(fk, l, x), spherical_bessel(gk, l, x), q * spherical_bessel_derivative(fk, l, x),
            q * spherical_bessel_derivative(gk, l, x)};
}

struct Wave {
    double q;
    bool evanescent;
};

Wave wave_in(const Shell& s, double energy) {
    const double c = kSemiconductorUnits.hbar2_over_2me;
    const double d = energy - s.potential;
    return {std::sqrt(std::abs(d) * s.mass / c), d < 0};
}

// Chains the interface conditions outward. Coefficients of shell n are
// stored scaled; the true values are coeff * exp(log_scale[n]).
struct Chain {
    std::vector<double> a, b, log_scale;
    std::vector<Wave> waves;
};

Chain chain(const LayeredDevice& device, int l, double energy) {
    const auto& sh = device.shells();
    Chain c;
    c.a.push_back(1.0);
    c.b.push_back(0.0);
    c.log_scale.push_back(0.0);
    c.waves.push_back(wave_in(sh[0], energy));
    for (std::size_t n = 0; n + 1 < sh.size(); ++n) {
        const double r = sh[n].outer_radius;
        const Wave in = c.waves[n];
        const Wave out = wave_in(sh[n + 1], energy);
        const ShellFunctions fi = shell_functions(l, in.q, in.evanescent, r);
        const ShellFunctions fo = shell_functions(l, out.q, out.evanescent, r);
        const double value = c.a[n] * fi.f + c.b[n] * fi.g;
        const double flux = (c.a[n] * fi.fp + c.b[n] * fi.gp) / sh[n].mass;
        // [f g; f'/m g'/m] (a, b) = (value, flux)
        const double m = sh[n + 1].mass;
        const double det = fo.f * fo.gp / m - fo.g * fo.fp / m;
        double a = (value * fo.gp / m - fo.g * flux) / det;
        double b = (fo.f * flux - fo.fp / m * value) / det;
        const double scale = std::max(std::abs(a), std::abs(b));
        double log_scale = c.log_scale[n];
        if (scale > 0 && std::isfinite(scale)) {
            a /= scale;
            b /= scale;
            log_scale += std::log(scale);
        }
        c.a.push_back(a);
        c.b.push_back(b);
        c.log_scale.push_back(log_scale);
        c.waves.push_back(out);
    }
    return c;
}

double integrate_u2(const ChannelSolution& sol, double lo, double hi) {
    static const QuadratureRule<double> ref = gauss_legendre<double>(12);
    double sum = 0;
    for (const ShellSolution& s : sol.shells) {
        const double a = std::max(lo, s.inner_radius);
        const double b = std::min(hi, s.outer_radius);
        if (!(b > a)) continue;
        const double width = b - a;
        const int pieces = std::max(4, int(std::ceil(width * (4.0 * s.wavenumber + 20.0))));
        const double h = width / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double mid = a + (p + 0.5) * h;
            for (int g = 0; g < ref.per_interval; ++g) {
                const double r = mid + 0.5 * h * ref.nodes[g];
                const double u = sol.reduced(r);
                sum += 0.5 * h * ref.weights[g] * u * u;
            }
        }
    }
    return sum;
}

}  // namespace

double ChannelSolution::radial(double r) const {
    for (const ShellSolution& s : shells)
        if (r < s.outer_radius || &s == &shells.back()) {
            const ShellFunctions f = shell_functions(l, s.wavenumber, s.evanescent, r);
            return s.a * f.f + s.b * f.g;
        }
    return 0;
}

double ChannelSolution::radial_derivative(double r) const {
    for (const ShellSolution& s : shells)
        if (r < s.outer_radius || &s == &shells.back()) {
            const ShellFunctions f = shell_functions(l, s.wavenumber, s.evanescent, r);
            return s.a * f.fp + s.b * f.gp;
        }
    return 0;
}

double ChannelSolution::interface_residual() const {
    double worst = 0;
    for (std::size_t n = 0; n + 1 < shells.size(); ++n) {
        const ShellSolution& in = shells[n];
        const ShellSolution& out = shells[n + 1];
        const double r = in.outer_radius;
        const ShellFunctions fi = shell_functions(l, in.wavenumber, in.evanescent, r);
        const ShellFunctions fo = shell_functions(l, out.wavenumber, out.evanescent, r);
        const double v_in = in.a * fi.f + in.b * fi.g;
        const double v_out = out.a * fo.f + out.b * fo.g;
        const double f_in = (in.a * fi.fp + in.b * fi.gp) / in.mass;
        const double f_out = (out.a * fo.fp + out.b * fo.gp) / out.mass;
        const double sv = std::max({std::abs(v_in), std::abs(v_out), 1e-300});
        const double sf = std::max({std::abs(f_in), std::abs(f_out), 1e-300});
        worst = std::max({worst, std::abs(v_in - v_out) / sv, std::abs(f_in - f_out) / sf});
    }
    return worst;
}

double matching_determinant(const LayeredDevice& device, int l, double energy) {
    const double v_inf = device.asymptotic_potential();
    double v_min = v_inf;
    for (const Shell& s : device.shells()) v_min = std::min(v_min, s.potential);
    if (!(energy > v_min && energy < v_inf)) throw DomainError("energy outside (min V, V_inf)");
    const auto& sh = device.shells();
    if (sh.size() == 1) return 0.0;
    const Chain c = chain(device, l, energy);
    // Redo the last matching with the cladding functions folded into the
    // coefficients, so neither component under- or overflows on its own.
    const std::size_t n = sh.size() - 2;
    const double r = sh[n].outer_radius;
    const Wave in = c.waves[n], out = c.waves[n + 1];
    const ShellFunctions fi = shell_functions(l, in.q, in.evanescent, r);
    const ShellFunctions fo = shell_functions(l, out.q, out.evanescent, r);
    const double value = c.a[n] * fi.f + c.b[n] * fi.g;
    const double flux = (c.a[n] * fi.fp + c.b[n] * fi.gp) / sh[n].mass;
    const double m = sh[n + 1].mass;
    const double det = fo.f * fo.gp / m - fo.g * fo.fp / m;
    const double grow = (value * (fo.f * fo.gp) / m - (fo.f * fo.g) * flux) / det;
    const double decay = ((fo.g * fo.f) * flux - (fo.g * fo.fp) / m * value) / det;
    const double denom = std::abs(grow) + std::abs(decay);
    return denom > 0 ? grow / denom : 0.0;
}

ChannelSolution channel_solution(const LayeredDevice& device, int l, double energy) {
    const Chain c = chain(device, l, energy);
    const auto& sh = device.shells();
    const double top = *std::max_element(c.log_scale.begin(), c.log_scale.end());
    ChannelSolution sol;
    sol.l = l;
    sol.energy = energy;
    double inner = 0;
    for (std::size_t n = 0; n < sh.size(); ++n) {
        const double s = std::exp(c.log_scale[n] - top);
        double outer = sh[n].outer_radius;
        sol.shells.push_back({inner, outer, c.waves[n].q, c.waves[n].evanescent, c.a[n] * s, c.b[n] * s, sh[n].mass});
        inner = outer;
    }
    // the cladding solution is kept purely decaying
    if (sol.shells.size() > 1 && sol.shells.back().evanescent) sol.shells.back().a = 0;

    const ShellSolution& last = sol.shells.back();
    const double tail = last.evanescent && last.wavenumber > 0 ? 60.0 / last.wavenumber : 0.0;
    const double reach = last.inner_radius + tail;
    sol.norm = 1;
    const double n2 = integrate_u2(sol, 0.0, reach);
    sol.norm = n2 > 0 ? std::sqrt(n2) : 1.0;
    return sol;
}

AnalyticRoots find_bound_states(const LayeredDevice& device, int l, double resolution) {
    if (!(resolution > 0)) throw InvalidParameter("scan resolution must be positive");
    const double v_inf = device.asymptotic_potential();
    double v_min = v_inf;
    for (const Shell& s : device.shells()) v_min = std::min(v_min, s.potential);
    AnalyticRoots out;
    if (!(v_inf > v_min)) return out;

    const long n = std::max(4L, long(std::ceil((v_inf - v_min) / resolution)));
    const double step = (v_inf - v_min) / double(n);
    auto energy_at = [&](long i) { return v_min + step * double(i); };

    double prev_e = energy_at(1);
    double prev_d = matching_determinant(device, l, prev_e);
    if (std::abs(prev_d) < 1e-12) throw SolverError("root on the lower scan boundary; widen the energy range");
    for (long i = 2; i < n; ++i) {
        const double e = energy_at(i);
        const double d = matching_determinant(device, l, e);
        if (i == n - 1 && std::abs(d) < 1e-12)
            throw SolverError("root on the upper scan boundary; widen the energy range");
        if ((prev_d < 0) != (d < 0)) {
            double lo = prev_e, hi = e, dlo = prev_d;
            for (;;) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double dm = matching_determinant(device, l, mid);
                if ((dm < 0) == (dlo < 0)) {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            out.energies.push_back(0.5 * (lo + hi));
        }
        prev_e = e;
        prev_d = d;
    }
    for (std::size_t i = 1; i < out.energies.size(); ++i)
        if (out.energies[i] - out.energies[i - 1] < 1e-6) {
            std::ostringstream os;
            os.precision(12);
            os << "quasi-degenerate roots in channel l=" << l << ": " << out.energies[i - 1] << " and "
               << out.energies[i];
            out.warnings.push_back(os.str());
        }
    return out;
}

BoundState to_bound_state(const ChannelSolution& sol, int n_r, const BasisPtr& basis, const RadialPotential& p) {
    const auto& quad = basis->quadrature();
    BoundState st;
    st.energy = sol.energy;
    st.l = sol.l;
    st.n_r = n_r;
    st.u_nodes.resize(quad.size());
    for (Eigen::Index q = 0; q < quad.size(); ++q) st.u_nodes[q] = sol.reduced(quad.nodes[q]);
    const double norm = (quad.weights * st.u_nodes.array().square()).sum();
    st.u_nodes /= std::sqrt(norm);
    st.norm_residual = std::abs(norm - 1.0);
    st.basis = basis;
    const RadialInterval well = inner_well(p);
    st.p_inner = integrate_u2(sol, well.lo, std::min(well.hi, basis->spec().cutoff)) / norm;
    return st;
}

double OracleReport::max_abs_diff() const {
    double worst = 0;
    for (const OracleRow& r : rows) {
        const double d = std::abs(r.spectral - r.analytic);
        worst = std::isnan(d) ? std::numeric_limits<double>::infinity() : std::max(worst, d);
    }
    return worst;
}

OracleReport oracle_check(const LayeredDevice& device, const SpectrumTable& table, double resolution) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    OracleReport report;
    int top_l = -1;
    for (const BoundState& s : table.states) top_l = std::max(top_l, s.l);
    for (int l = 0;; ++l) {
        const AnalyticRoots roots = find_bound_states(device, l, resolution);
        report.warnings.insert(report.warnings.end(), roots.warnings.begin(), roots.warnings.end());
        std::vector<double> spline;
        for (const BoundState& s : table.states)
            if (s.l == l) spline.push_back(s.energy);
        const std::size_t n = std::max(spline.size(), roots.energies.size());
        for (std::size_t i = 0; i < n; ++i)
            report.rows.push_back({l, int(i), i < spline.size() ? spline[i] : nan,
                                   i < roots.energies.size() ? roots.energies[i] : nan});
        if (roots.energies.empty() && l > top_l) break;
    }
    return report;
}

}  // namespace qdot
