#pragma once

// Clamped B-spline radial basis on a uniform breakpoint grid, plus
// Gauss-Legendre quadrature over the knot intervals.
//
// Basis functions are indexed two ways:
//   * full index j = 0 .. total_splines()-1 covers every spline of the knot
//     sequence (support [t_j, t_{j+k}]);
//   * retained index i = 0 .. size()-1 skips the first and the last spline,
//     i.e. full index i+1. Retained splines vanish at r = 0 and r = R.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "qdot/error.hpp"

namespace qdot {

inline constexpr int kMaxSplineOrder = 15;

template <typename Scalar>
using SmallArray = Eigen::Array<Scalar, Eigen::Dynamic, 1, 0, kMaxSplineOrder, 1>;

template <typename Scalar>
class KnotVector;

template <typename Scalar>
using InterfaceList = std::type_identity_t<std::span<const Scalar>>;

/// Clamped knots on [0, R] with I equal intervals. Each entry of
/// `interfaces` strictly inside (0, R) must coincide with a breakpoint
/// j*R/I; that breakpoint is repeated k-1 times so the basis is only C0
/// there. Interfaces at or beyond R are ignored.
template <typename Scalar>
KnotVector<Scalar> make_knots(Scalar R, int I, int k, InterfaceList<Scalar> interfaces = {});

template <typename Scalar = double>
class KnotVector {
public:
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    KnotVector() = default;

    int order() const { return order_; }
    Scalar cutoff() const { return cutoff_; }
    int intervals() const { return intervals_; }
    Scalar spacing() const { return cutoff_ / Scalar(intervals_); }
    const Array& knots() const { return knots_; }
    const std::vector<Scalar>& breakpoints() const { return breakpoints_; }
    /// Breakpoints carrying multiplicity order()-1 (material interfaces).
    const std::vector<Scalar>& interfaces() const { return interfaces_; }

    Eigen::Index total_splines() const { return knots_.size() - order_; }
    Eigen::Index size() const { return total_splines() - 2; }

    /// Breakpoint interval j with bp[j] <= r < bp[j+1]; r == R maps to the
    /// last interval.
    int interval_of(Scalar r) const {
        int j = static_cast<int>(std::floor(r * Scalar(intervals_) / cutoff_));
        j = std::clamp(j, 0, intervals_ - 1);
        if (j + 1 < intervals_ && r >= breakpoints_[j + 1]) ++j;
        if (j > 0 && r < breakpoints_[j]) --j;
        return j;
    }

    /// Knot index mu with t_mu = bp[j] < t_{mu+1} = bp[j+1].
    Eigen::Index span_of_interval(int j) const { return spans_[j]; }

    bool operator==(const KnotVector& o) const {
        return order_ == o.order_ && intervals_ == o.intervals_ && cutoff_ == o.cutoff_ &&
               interfaces_ == o.interfaces_;
    }

    friend KnotVector make_knots<Scalar>(Scalar, int, int, InterfaceList<Scalar>);

private:
    int order_ = 0;
    int intervals_ = 0;
    Scalar cutoff_ = 0;
    Array knots_;
    std::vector<Scalar> breakpoints_;
    std::vector<Scalar> interfaces_;
    std::vector<Eigen::Index> spans_;
};

template <typename Scalar>
KnotVector<Scalar> make_knots(Scalar R, int I, int k, InterfaceList<Scalar> interfaces) {
    if (!(R > 0)) throw InvalidParameter("cutoff radius must be positive");
    if (k < 2 || k > kMaxSplineOrder)
        throw InvalidParameter("spline order must lie in [2, " + std::to_string(kMaxSplineOrder) + "]");
    if (I < k) throw InvalidParameter("interval count I must be >= spline order k");

    KnotVector<Scalar> kv;
    kv.order_ = k;
    kv.intervals_ = I;
    kv.cutoff_ = R;
    kv.breakpoints_.resize(I + 1);
    for (int j = 0; j <= I; ++j) kv.breakpoints_[j] = R * Scalar(j) / Scalar(I);
    kv.breakpoints_[I] = R;

    const Scalar h = R / Scalar(I);
    std::vector<int> multiplicity(I + 1, 1);
    for (Scalar r : interfaces) {
        if (!(r > 0)) throw InvalidParameter("interface radius must be positive");
        if (r >= R) continue;
        const Scalar pos = r / h;
        const Scalar j = std::round(pos);
        if (std::abs(pos - j) > Scalar(1e-9) * std::max(Scalar(1), pos))
            throw ConfigError("interface at r = " + std::to_string(double(r)) +
                              " is not a knot of the uniform grid with spacing " +
                              std::to_string(double(h)) + "; choose R and I so that it is");
        const int ji = static_cast<int>(j);
        if (ji <= 0 || ji >= I) continue;
        if (multiplicity[ji] == 1) kv.interfaces_.push_back(kv.breakpoints_[ji]);
        multiplicity[ji] = k - 1;
    }
    std::sort(kv.interfaces_.begin(), kv.interfaces_.end());

    std::vector<Scalar> t(k - 1, Scalar(0));
    kv.spans_.resize(I);
    for (int j = 0; j <= I; ++j) {
        const int mult = (j == 0 || j == I) ? 1 : multiplicity[j];
        for (int m = 0; m < mult; ++m) t.push_back(kv.breakpoints_[j]);
        if (j < I) kv.spans_[j] = static_cast<Eigen::Index>(t.size()) - 1;
    }
    for (int m = 0; m < k - 1; ++m) t.push_back(R);
    kv.knots_ = Eigen::Map<const typename KnotVector<Scalar>::Array>(t.data(), Eigen::Index(t.size()));
    return kv;
}

/// The k splines that can be nonzero at one radius: full indices
/// first .. first+k-1, with values and first derivatives.
template <typename Scalar>
struct LocalSplines {
    Eigen::Index first = 0;
    SmallArray<Scalar> values;
    SmallArray<Scalar> derivatives;
};

namespace detail {

// de Boor's triangular scheme for the `order` splines nonzero on span mu.
template <typename Scalar>
SmallArray<Scalar> spline_values(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& t, Eigen::Index mu,
                                 int order, Scalar r) {
    SmallArray<Scalar> N(order), left(order), right(order);
    N.setZero();
    N[0] = 1;
    for (int j = 1; j < order; ++j) {
        left[j] = r - t[mu + 1 - j];
        right[j] = t[mu + j] - r;
        Scalar saved = 0;
        for (int i = 0; i < j; ++i) {
            const Scalar denom = right[i + 1] + left[j - i];
            const Scalar temp = denom != 0 ? N[i] / denom : Scalar(0);
            N[i] = saved + right[i + 1] * temp;
            saved = left[j - i] * temp;
        }
        N[j] = saved;
    }
    return N;
}

}  // namespace detail

template <typename Scalar>
LocalSplines<Scalar> local_splines(const KnotVector<Scalar>& kv, Scalar r) {
    const int k = kv.order();
    const auto& t = kv.knots();
    const Eigen::Index mu = kv.span_of_interval(kv.interval_of(r));

    LocalSplines<Scalar> out;
    out.first = mu - k + 1;
    out.values = detail::spline_values(t, mu, k, r);
    out.derivatives.setZero(k);
    // B'_{i,k} = (k-1) [B_{i,k-1}/(t_{i+k-1}-t_i) - B_{i+1,k-1}/(t_{i+k}-t_{i+1})]
    const SmallArray<Scalar> lower = detail::spline_values(t, mu, k - 1, r);
    for (int a = 0; a < k; ++a) {
        const Eigen::Index i = out.first + a;
        Scalar d = 0;
        if (a >= 1) {
            const Scalar span = t[i + k - 1] - t[i];
            if (span > 0) d += lower[a - 1] / span;
        }
        if (a <= k - 2) {
            const Scalar span = t[i + k] - t[i + 1];
            if (span > 0) d -= lower[a] / span;
        }
        out.derivatives[a] = Scalar(k - 1) * d;
    }
    return out;
}

/// Value (d = 0) or first derivative (d = 1) of spline `full_index`.
template <typename Scalar>
Scalar eval_full_spline(const KnotVector<Scalar>& kv, Eigen::Index full_index, Scalar r, int d) {
    if (d != 0 && d != 1) throw InvalidParameter("derivative order must be 0 or 1");
    if (!(r >= 0 && r <= kv.cutoff())) throw DomainError("radius outside [0, R]");
    if (full_index < 0 || full_index >= kv.total_splines()) throw InvalidParameter("spline index out of range");
    const LocalSplines<Scalar> loc = local_splines(kv, r);
    const Eigen::Index a = full_index - loc.first;
    if (a < 0 || a >= kv.order()) return 0;
    return d == 0 ? loc.values[a] : loc.derivatives[a];
}

/// Retained basis function i (full spline i+1).
template <typename Scalar>
Scalar eval_basis(const KnotVector<Scalar>& kv, Eigen::Index i, Scalar r, int d) {
    if (i < 0 || i >= kv.size()) throw InvalidParameter("basis index out of range");
    return eval_full_spline(kv, i + 1, r, d);
}

template <typename Scalar = double>
struct QuadratureRule {
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    Array nodes;
    Array weights;
    int per_interval = 0;

    Eigen::Index size() const { return nodes.size(); }
    Eigen::Index intervals() const { return per_interval ? nodes.size() / per_interval : 0; }
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_G).
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int G) {
    if (G < 1) throw InvalidParameter("quadrature needs at least one node per interval");
    QuadratureRule<Scalar> rule;
    rule.per_interval = G;
    rule.nodes.resize(G);
    rule.weights.resize(G);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    // (P_G(x), P_G'(x)) by the three-term recurrence
    auto legendre = [G](Scalar x) {
        Scalar p0 = 1, p1 = x;
        for (int n = 2; n <= G; ++n) {
            const Scalar p2 = (Scalar(2 * n - 1) * x * p1 - Scalar(n - 1) * p0) / Scalar(n);
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, Scalar(G) * (x * p1 - p0) / (x * x - 1)};
    };
    for (int i = 0; i < (G + 1) / 2; ++i) {
        Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(G) + Scalar(0.5)));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(x);
            const Scalar dx = p / dp;
            x -= dx;
            if (std::abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
        }
        const Scalar dp = legendre(x).second;
        const Scalar w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[G - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[G - 1 - i] = w;
    }
    if (G % 2 == 1) rule.nodes[G / 2] = 0;
    return rule;
}

/// G Gauss-Legendre nodes mapped onto every breakpoint interval, ordered by r.
template <typename Scalar>
QuadratureRule<Scalar> make_quadrature(const KnotVector<Scalar>& kv, int G) {
    const QuadratureRule<Scalar> ref = gauss_legendre<Scalar>(G);
    const auto& bp = kv.breakpoints();
    const int I = kv.intervals();
    QuadratureRule<Scalar> rule;
    rule.per_interval = G;
    rule.nodes.resize(Eigen::Index(I) * G);
    rule.weights.resize(Eigen::Index(I) * G);
    for (int j = 0; j < I; ++j) {
        const Scalar mid = (bp[j] + bp[j + 1]) / 2;
        const Scalar half = (bp[j + 1] - bp[j]) / 2;
        rule.nodes.segment(Eigen::Index(j) * G, G) = mid + half * ref.nodes;
        rule.weights.segment(Eigen::Index(j) * G, G) = half * ref.weights;
    }
    return rule;
}

}  // namespace qdot
