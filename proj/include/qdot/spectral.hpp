#pragma once

// Radial Hamiltonian in the B-spline basis, bound-state solves, labelling,
// localization, and structural sweeps.

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qdot/banded.hpp"
#include "qdot/model.hpp"
#include "qdot/splines.hpp"

namespace qdot {

struct BasisSpec {
    double cutoff = 16.0;
    int intervals = 320;
    int order = 5;
    int quad_nodes = 0;  // 0 selects order + 2

    int nodes_per_interval() const { return quad_nodes > 0 ? quad_nodes : order + 2; }
    double spacing() const { return cutoff / intervals; }
    bool operator==(const BasisSpec&) const = default;
};

/// R = 16 nm, I = 320 for layered devices; R = 40 bohr, I = 400 for the
/// exp-sine potential.
BasisSpec default_basis(const RadialPotential& p);

/// B-spline basis for u(r) = r R(r) together with its quadrature rule and
/// the spline values tabulated at every quadrature node.
class RadialBasis {
public:
    RadialBasis(const BasisSpec& spec, std::span<const double> interfaces);

    const BasisSpec& spec() const { return spec_; }
    const KnotVector<double>& knots() const { return knots_; }
    const QuadratureRule<double>& quadrature() const { return quad_; }
    Eigen::Index size() const { return knots_.size(); }
    int order() const { return spec_.order; }

    /// Full index of the first spline that is nonzero at node q.
    Eigen::Index first_spline(Eigen::Index q) const { return first_[q]; }
    const Eigen::MatrixXd& node_values() const { return values_; }          // order x nodes
    const Eigen::MatrixXd& node_derivatives() const { return derivs_; }     // order x nodes

    /// u at every quadrature node for the given coefficients.
    Eigen::VectorXd sample(const Eigen::VectorXd& coeffs) const;
    /// u(r) (d = 0) or u'(r) (d = 1).
    double evaluate(const Eigen::VectorXd& coeffs, double r, int d = 0) const;
    /// Integral of u^2 over [lo, hi] (exact partial intervals).
    double integrate_square(const Eigen::VectorXd& coeffs, double lo, double hi) const;

    bool operator==(const RadialBasis& o) const { return spec_ == o.spec_ && knots_ == o.knots_; }

private:
    BasisSpec spec_;
    KnotVector<double> knots_;
    QuadratureRule<double> quad_;
    Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 1> first_;
    Eigen::MatrixXd values_;
    Eigen::MatrixXd derivs_;
};

using BasisPtr = std::shared_ptr<const RadialBasis>;

/// Basis for p whose knots contain every interface of p below the cutoff.
BasisPtr make_basis(const BasisSpec& spec, const RadialPotential& p);

struct ChannelMatrices {
    int l = 0;
    SymmetricBand hamiltonian;
    SymmetricBand overlap;
};

/// H_ij = int (c/m) u_i' u_j' + [c l(l+1)/(m r^2) + V] u_i u_j dr
///        + sum_s c [1/m]_s u_i(r_s) u_j(r_s) / r_s,   S_ij = int u_i u_j dr,
/// with c = hbar^2/2m_e. The interface sum is the boundary term of the 3-D
/// kinetic operator -hbar^2/2 div(1/m) grad written for u = r R.
/// Throws ConfigError when an interface below R is not a basis knot.
ChannelMatrices assemble(const RadialBasis& basis, const RadialPotential& p, int l);

struct BoundState {
    double energy = 0;
    int l = 0;
    int n_r = 0;
    Eigen::VectorXd coeffs;   // basis coefficients of u
    Eigen::VectorXd u_nodes;  // u at the basis quadrature nodes
    double p_inner = 0;
    double norm_residual = 0;  // |int u^2 dr - 1|
    bool quasi_degenerate = false;
    BasisPtr basis;
};

enum class EigenMethod { dense, banded };

struct SolveOptions {
    EigenMethod method = EigenMethod::dense;
    /// States must satisfy E < cap - margin.
    double margin = 1e-9;
};

/// Eigenpairs of (H, S) below `energy_cap`, normalized, sign-fixed
/// (u > 0 next to the origin), labelled n_r = 0, 1, ... and scored with
/// P_inner for p. Throws SolverError if S is not positive definite.
std::vector<BoundState> solve_channel(const ChannelMatrices& m, double energy_cap, const BasisPtr& basis,
                                      const RadialPotential& p, const SolveOptions& opts = {});

/// Probability inside inner_well(p).
double classify_localization(const BoundState& state, const RadialPotential& p);

/// Sign changes of u on (0, R), ignoring samples below rel_tol * max|u|.
int count_nodes(const BoundState& state, double rel_tol = 1e-7);

struct SpectrumTable {
    RadialPotential potential;
    BasisSpec basis;
    double sweep_param = 0;
    std::vector<BoundState> states;  // sorted by (l, n_r)

    int count_localized(double threshold = 0.5) const;
    std::vector<const BoundState*> localized(double threshold = 0.5) const;
    const BoundState* find(int l, int n_r) const;
};

struct SpectrumOptions {
    int l_max = 40;
    SolveOptions solve{};
    double degeneracy_tol = 1e-9;
};

/// Bound states of every l channel up to l_max; stops at the first channel
/// without bound states (E(n_r, l) increases with l).
SpectrumTable solve_spectrum(const RadialPotential& p, const BasisSpec& spec, const SpectrumOptions& opts = {});

struct SweepBasisOptions {
    double knot_spacing = 0.01;     // nm
    double tail_beyond_last = 10;   // nm of cladding kept past r3
    int order = 5;
};

/// Spectra versus core radius of the fig2 structure (well and barrier widths fixed).
/// Each requested r_c is moved to the nearest multiple of the knot spacing
/// so that every interface is a knot; the table records the value used.
std::vector<SpectrumTable> spectrum_sweep(const std::vector<double>& rc_grid, int l_max,
                                          const SweepBasisOptions& basis = {}, int jobs = 1);

struct CriticalBracket {
    double lo;
    double hi;
    int count_lo;
    int count_hi;
};

/// Bisects v0 on the number of inner-localized states until the bracket is
/// narrower than tol. Throws NotFoundError if the count does not change
/// between v0_lo and v0_hi.
CriticalBracket find_critical_v0(const ExpSinePotential& family, double v0_lo, double v0_hi,
                                 const BasisSpec& spec, double tol = 1e-3, double threshold = 0.5,
                                 const SpectrumOptions& opts = {});

}  // namespace qdot
