#include "qdot/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "qdot/error.hpp"
#include "qdot/parallel.hpp"

namespace qdot {

BasisSpec default_basis(const RadialPotential& p) {
    if (std::holds_alternative<ExpSinePotential>(p)) return BasisSpec{40.0, 400, 5, 0};
    return BasisSpec{16.0, 320, 5, 0};
}

RadialBasis::RadialBasis(const BasisSpec& spec, std::span<const double> interfaces)
    : spec_(spec),
      knots_(make_knots<double>(spec.cutoff, spec.intervals, spec.order, interfaces)),
      quad_(make_quadrature(knots_, spec.nodes_per_interval())) {
    const Eigen::Index nq = quad_.size();
    const int k = spec_.order;
    first_.resize(nq);
    values_.resize(k, nq);
    derivs_.resize(k, nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
        const LocalSplines<double> loc = local_splines(knots_, quad_.nodes[q]);
        first_[q] = loc.first;
        values_.col(q) = loc.values.matrix();
        derivs_.col(q) = loc.derivatives.matrix();
    }
}

Eigen::VectorXd RadialBasis::sample(const Eigen::VectorXd& coeffs) const {
    const Eigen::Index nq = quad_.size();
    const Eigen::Index n = size();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(nq);
    for (Eigen::Index q = 0; q < nq; ++q)
        for (int a = 0; a < spec_.order; ++a) {
            const Eigen::Index i = first_[q] + a - 1;
            if (i >= 0 && i < n) u[q] += coeffs[i] * values_(a, q);
        }
    return u;
}

double RadialBasis::evaluate(const Eigen::VectorXd& coeffs, double r, int d) const {
    if (!(r >= 0 && r <= spec_.cutoff)) throw DomainError("radius outside [0, R]");
    const LocalSplines<double> loc = local_splines(knots_, r);
    const Eigen::Index n = size();
    double u = 0;
    for (int a = 0; a < spec_.order; ++a) {
        const Eigen::Index i = loc.first + a - 1;
        if (i >= 0 && i < n) u += coeffs[i] * (d == 0 ? loc.values[a] : loc.derivatives[a]);
    }
    return u;
}

double RadialBasis::integrate_square(const Eigen::VectorXd& coeffs, double lo, double hi) const {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, spec_.cutoff);
    if (!(hi > lo)) return 0;
    const auto& bp = knots_.breakpoints();
    const int G = quad_.per_interval;
    const QuadratureRule<double> ref = gauss_legendre<double>(G);
    const Eigen::VectorXd u = sample(coeffs);
    double sum = 0;
    for (int j = 0; j < knots_.intervals(); ++j) {
        const double a = std::max(lo, bp[j]);
        const double b = std::min(hi, bp[j + 1]);
        if (!(b > a)) continue;
        if (a == bp[j] && b == bp[j + 1]) {
            const Eigen::Index q0 = Eigen::Index(j) * G;
            sum += (quad_.weights.segment(q0, G) * u.segment(q0, G).array().square()).sum();
        } else {
            for (int g = 0; g < G; ++g) {
                const double x = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[g];
                const double v = evaluate(coeffs, x);
                sum += 0.5 * (b - a) * ref.weights[g] * v * v;
            }
        }
    }
    return sum;
}

BasisPtr make_basis(const BasisSpec& spec, const RadialPotential& p) {
    const std::vector<double> ifs = interfaces(p);
    return std::make_shared<const RadialBasis>(spec, ifs);
}

ChannelMatrices assemble(const RadialBasis& basis, const RadialPotential& p, int l) {
    if (l < 0) throw InvalidParameter("angular momentum must be non-negative");
    const double R = basis.spec().cutoff;
    const double h = basis.spec().spacing();
    const auto& knot_ifs = basis.knots().interfaces();
    for (double r : interfaces(p)) {
        if (r >= R) continue;
        const bool aligned = std::any_of(knot_ifs.begin(), knot_ifs.end(),
                                         [&](double t) { return std::abs(t - r) <= 1e-9 * h; });
        if (!aligned)
            throw ConfigError("potential interface at r = " + std::to_string(r) +
                              " is not an interface knot of the basis");
    }

    const double c = unit_system(p).hbar2_over_2me;
    const double centrifugal = c * double(l) * double(l + 1);
    const int k = basis.order();
    const Eigen::Index n = basis.size();
    const auto& quad = basis.quadrature();
    const auto& val = basis.node_values();
    const auto& der = basis.node_derivatives();

    ChannelMatrices out{l, SymmetricBand(n, k - 1), SymmetricBand(n, k - 1)};
    for (Eigen::Index q = 0; q < quad.size(); ++q) {
        const double r = quad.nodes[q];
        const double w = quad.weights[q];
        const double m = mass_at(p, r);
        const double kinetic = w * c / m;
        const double local = w * (centrifugal / (m * r * r) + potential_at(p, r));
        const Eigen::Index first = basis.first_spline(q) - 1;
        for (int a = 0; a < k; ++a) {
            const Eigen::Index i = first + a;
            if (i < 0 || i >= n) continue;
            for (int b = 0; b <= a; ++b) {
                const Eigen::Index j = first + b;
                if (j < 0) continue;
                out.hamiltonian.add(i, j, kinetic * der(a, q) * der(b, q) + local * val(a, q) * val(b, q));
                out.overlap.add(i, j, w * val(a, q) * val(b, q));
            }
        }
    }

    for (const MassJump& jump : mass_jumps(p)) {
        if (jump.radius >= R) continue;
        const LocalSplines<double> loc = local_splines(basis.knots(), jump.radius);
        const double coef = c * jump.inverse_mass_jump / jump.radius;
        for (int a = 0; a < k; ++a) {
            const Eigen::Index i = loc.first + a - 1;
            if (i < 0 || i >= n || loc.values[a] == 0) continue;
            for (int b = 0; b <= a; ++b) {
                const Eigen::Index j = loc.first + b - 1;
                if (j < 0 || loc.values[b] == 0) continue;
                out.hamiltonian.add(i, j, coef * loc.values[a] * loc.values[b]);
            }
        }
    }
    return out;
}

double classify_localization(const BoundState& state, const RadialPotential& p) {
    const RadialInterval well = inner_well(p);
    return state.basis->integrate_square(state.coeffs, well.lo, well.hi);
}

int count_nodes(const BoundState& state, double rel_tol) {
    const double cutoff = rel_tol * state.u_nodes.cwiseAbs().maxCoeff();
    int nodes = 0;
    int sign = 0;
    for (Eigen::Index q = 0; q < state.u_nodes.size(); ++q) {
        const double u = state.u_nodes[q];
        if (std::abs(u) <= cutoff) continue;
        const int s = u > 0 ? 1 : -1;
        if (sign != 0 && s != sign) ++nodes;
        sign = s;
    }
    return nodes;
}

std::vector<BoundState> solve_channel(const ChannelMatrices& m, double energy_cap, const BasisPtr& basis,
                                      const RadialPotential& p, const SolveOptions& opts) {
    const double cap = energy_cap - opts.margin;
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;

    if (opts.method == EigenMethod::dense) {
        const Eigen::MatrixXd h = m.hamiltonian.dense();
        const Eigen::MatrixXd s = m.overlap.dense();
        if (Eigen::LLT<Eigen::MatrixXd>(s).info() != Eigen::Success)
            throw SolverError("overlap matrix is not positive definite; use fewer intervals or a larger cutoff");
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(h, s);
        if (es.info() != Eigen::Success) throw SolverError("generalized eigensolver did not converge");
        Eigen::Index count = 0;
        while (count < es.eigenvalues().size() && es.eigenvalues()[count] < cap) ++count;
        values = es.eigenvalues().head(count);
        vectors = es.eigenvectors().leftCols(count);
    } else {
        EigenPairs ep = banded_eigen_below(m.hamiltonian, m.overlap, cap, minimum_potential(p) - 1.0);
        values = std::move(ep.values);
        vectors = std::move(ep.vectors);
    }

    std::vector<BoundState> out;
    out.reserve(values.size());
    for (Eigen::Index j = 0; j < values.size(); ++j) {
        BoundState st;
        st.energy = values[j];
        st.l = m.l;
        st.n_r = int(j);
        st.coeffs = vectors.col(j);
        const double cmax = st.coeffs.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < st.coeffs.size(); ++i)
            if (std::abs(st.coeffs[i]) > 1e-8 * cmax) {
                if (st.coeffs[i] < 0) st.coeffs = -st.coeffs;
                break;
            }
        st.u_nodes = basis->sample(st.coeffs);
        const double norm = (basis->quadrature().weights * st.u_nodes.array().square()).sum();
        st.coeffs /= std::sqrt(norm);
        st.u_nodes /= std::sqrt(norm);
        st.norm_residual = std::abs((basis->quadrature().weights * st.u_nodes.array().square()).sum() - 1.0);
        st.basis = basis;
        st.p_inner = classify_localization(st, p);
        out.push_back(std::move(st));
    }
    return out;
}

int SpectrumTable::count_localized(double threshold) const {
    return int(std::count_if(states.begin(), states.end(), [&](const BoundState& s) { return s.p_inner > threshold; }));
}

std::vector<const BoundState*> SpectrumTable::localized(double threshold) const {
    std::vector<const BoundState*> out;
    for (const auto& s : states)
        if (s.p_inner > threshold) out.push_back(&s);
    return out;
}

const BoundState* SpectrumTable::find(int l, int n_r) const {
    for (const auto& s : states)
        if (s.l == l && s.n_r == n_r) return &s;
    return nullptr;
}

SpectrumTable solve_spectrum(const RadialPotential& p, const BasisSpec& spec, const SpectrumOptions& opts) {
    SpectrumTable table{p, spec, family_parameter(p), {}};
    const BasisPtr basis = make_basis(spec, p);
    const double cap = asymptotic_potential(p);
    for (int l = 0; l <= opts.l_max; ++l) {
        std::vector<BoundState> channel = solve_channel(assemble(*basis, p, l), cap, basis, p, opts.solve);
        if (channel.empty()) break;
        for (auto& s : channel) table.states.push_back(std::move(s));
    }
    auto& st = table.states;
    for (std::size_t a = 0; a < st.size(); ++a)
        for (std::size_t b = a + 1; b < st.size(); ++b)
            if (std::abs(st[a].energy - st[b].energy) < opts.degeneracy_tol) {
                st[a].quasi_degenerate = true;
                st[b].quasi_degenerate = true;
            }
    return table;
}

std::vector<SpectrumTable> spectrum_sweep(const std::vector<double>& rc_grid, int l_max,
                                          const SweepBasisOptions& basis, int jobs) {
    const double h = basis.knot_spacing;
    if (!(h > 0)) throw InvalidParameter("knot spacing must be positive");
    for (std::size_t i = 0; i < rc_grid.size(); ++i) {
        if (!(rc_grid[i] > 0)) throw InvalidParameter("core radii must be positive");
        if (i > 0 && !(rc_grid[i] > rc_grid[i - 1])) throw InvalidParameter("core radii must increase");
    }
    SpectrumOptions opts;
    opts.l_max = l_max;
    opts.solve.method = EigenMethod::banded;
    return parallel_map(rc_grid.size(), jobs, [&](std::size_t i) {
        const double rc = std::max(1.0, std::round(rc_grid[i] / h)) * h;
        const LayeredDevice dev = fig2_device(rc);
        const double r3 = dev.radii().back();
        const int intervals = int(std::ceil((r3 + basis.tail_beyond_last) / h - 1e-9));
        const BasisSpec spec{intervals * h, intervals, basis.order, 0};
        return solve_spectrum(RadialPotential{dev}, spec, opts);
    });
}

CriticalBracket find_critical_v0(const ExpSinePotential& family, double v0_lo, double v0_hi,
                                 const BasisSpec& spec, double tol, double threshold,
                                 const SpectrumOptions& opts) {
    if (!(v0_hi > v0_lo)) throw InvalidParameter("v0 range must be increasing");
    auto count = [&](double v0) {
        ExpSinePotential e = family;
        e.v0 = v0;
        return solve_spectrum(RadialPotential{e}, spec, opts).count_localized(threshold);
    };
    CriticalBracket b{v0_lo, v0_hi, count(v0_lo), count(v0_hi)};
    if (b.count_hi <= b.count_lo)
        throw NotFoundError("no change in the number of inner-localized states between v0 = " +
                            std::to_string(v0_lo) + " and " + std::to_string(v0_hi));
    while (b.hi - b.lo > tol) {
        const double mid = 0.5 * (b.lo + b.hi);
        const int c = count(mid);
        if (c > b.count_lo) {
            b.hi = mid;
            b.count_hi = c;
        } else {
            b.lo = mid;
            b.count_lo = c;
        }
    }
    return b;
}

}  // namespace qdot
