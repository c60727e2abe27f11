#pragma once

// Spherical Bessel functions j_l, y_l and modified spherical Bessel
// functions i_l, k_l of real argument, with first derivatives.
//
// Normalization: k_0(x) = exp(-x)/x, k_1(x) = exp(-x)(1/x + 1/x^2).

#include <cmath>
#include <utility>

#include "qdot/error.hpp"

namespace qdot {

enum class BesselKind { j, y, i, k };

namespace detail {

// x^l/(2l+1)!! * sum_n (s x^2/2)^n / (n! (2l+3)(2l+5)...(2l+2n+1)), s = -1 for j, +1 for i
template <typename Scalar>
Scalar bessel_series(int l, Scalar x, Scalar s) {
    Scalar lead = 1;
    for (int n = 1; n <= l; ++n) lead *= x / Scalar(2 * n + 1);
    const Scalar z = s * x * x / 2;
    Scalar term = 1, sum = 1;
    for (int n = 1; n < 500; ++n) {
        term *= z / (Scalar(n) * Scalar(2 * l + 2 * n + 1));
        sum += term;
        if (std::abs(term) <= std::abs(sum) * Scalar(1e-17)) break;
    }
    return lead * sum;
}

// Miller's downward recurrence f_{n-1} = (2n+1)/x f_n - s f_{n+1} from a
// starting order well above l. Returns unnormalized (f_l, f_0, f_1) on a
// common scale.
template <typename Scalar>
struct MillerValues {
    Scalar fl, f0, f1;
};

template <typename Scalar>
MillerValues<Scalar> bessel_downward(int l, Scalar x, Scalar s) {
    const int start = l + 30 + int(std::sqrt(40.0 * (l + 1)) + double(x));
    Scalar next = 0, cur = Scalar(1e-300);
    MillerValues<Scalar> out{0, 0, 0};
    for (int n = start; n >= 1; --n) {
        const Scalar prev = Scalar(2 * n + 1) / x * cur - s * next;
        next = cur;
        cur = prev;
        if (n - 1 == l) out.fl = cur;
        if (n - 1 == 1) out.f1 = cur;
        if (std::abs(cur) > Scalar(1e250)) {
            cur *= Scalar(1e-250);
            next *= Scalar(1e-250);
            out.fl *= Scalar(1e-250);
            out.f1 *= Scalar(1e-250);
        }
    }
    out.f0 = cur;
    return out;
}

}  // namespace detail

template <typename Scalar = double>
Scalar spherical_bessel(BesselKind kind, int l, Scalar x) {
    if (l < 0) throw InvalidParameter("bessel order must be non-negative");
    switch (kind) {
        case BesselKind::j: {
            // j_l has parity (-1)^l
            const Scalar ax = std::abs(x);
            const Scalar sgn = (x < 0 && l % 2) ? Scalar(-1) : Scalar(1);
            if (ax < 1) return sgn * detail::bessel_series(l, ax, Scalar(-1));
            const Scalar s = std::sin(ax), c = std::cos(ax);
            const Scalar j0 = s / ax;
            const Scalar j1 = s / (ax * ax) - c / ax;
            if (l == 0) return j0;
            if (l == 1) return sgn * j1;
            if (l == 2) return (Scalar(3) / (ax * ax * ax) - Scalar(1) / ax) * s - Scalar(3) * c / (ax * ax);
            if (ax > Scalar(l)) {
                Scalar a = j0, b = j1;
                for (int n = 1; n < l; ++n) {
                    const Scalar nxt = Scalar(2 * n + 1) / ax * b - a;
                    a = b;
                    b = nxt;
                }
                return sgn * b;
            }
            // normalize on the larger of j0, j1 so a zero of either is harmless
            const auto m = detail::bessel_downward(l, ax, Scalar(1));
            return sgn * (std::abs(j0) >= std::abs(j1) ? m.fl * (j0 / m.f0) : m.fl * (j1 / m.f1));
        }
        case BesselKind::y: {
            if (!(x > 0)) throw DomainError("y_l needs x > 0");
            const Scalar s = std::sin(x), c = std::cos(x);
            Scalar a = -c / x;
            if (l == 0) return a;
            Scalar b = -c / (x * x) - s / x;
            for (int n = 1; n < l; ++n) {
                const Scalar nxt = Scalar(2 * n + 1) / x * b - a;
                a = b;
                b = nxt;
            }
            return b;
        }
        case BesselKind::i: {
            const Scalar ax = std::abs(x);
            const Scalar sgn = (x < 0 && l % 2) ? Scalar(-1) : Scalar(1);
            if (ax < 1) return sgn * detail::bessel_series(l, ax, Scalar(1));
            const Scalar sh = std::sinh(ax), ch = std::cosh(ax);
            const Scalar i0 = sh / ax;
            if (l == 0) return i0;
            if (l == 1) return sgn * (ch / ax - sh / (ax * ax));
            if (l == 2) return (Scalar(3) / (ax * ax * ax) + Scalar(1) / ax) * sh - Scalar(3) * ch / (ax * ax);
            const auto m = detail::bessel_downward(l, ax, Scalar(-1));
            return sgn * m.fl * (i0 / m.f0);
        }
        case BesselKind::k: {
            if (!(x > 0)) throw DomainError("k_l needs x > 0");
            const Scalar e = std::exp(-x);
            Scalar a = e / x;
            if (l == 0) return a;
            Scalar b = e * (Scalar(1) / x + Scalar(1) / (x * x));
            for (int n = 1; n < l; ++n) {
                const Scalar nxt = a + Scalar(2 * n + 1) / x * b;
                a = b;
                b = nxt;
            }
            return b;
        }
    }
    return Scalar(0);
}

/// d/dx of spherical_bessel(kind, l, x).
template <typename Scalar = double>
Scalar spherical_bessel_derivative(BesselKind kind, int l, Scalar x) {
    if (l == 0) {
        const Scalar f1 = spherical_bessel(kind, 1, x);
        return kind == BesselKind::i ? f1 : -f1;
    }
    const Scalar fl = spherical_bessel(kind, l, x);
    const Scalar fm = spherical_bessel(kind, l - 1, x);
    const Scalar tail = Scalar(l + 1) / x * fl;
    return kind == BesselKind::k ? -fm - tail : fm - tail;
}

}  // namespace qdot
