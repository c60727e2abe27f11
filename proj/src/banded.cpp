#include "qdot/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdot/error.hpp"

namespace qdot {

Eigen::MatrixXd SymmetricBand::dense() const {
    const Eigen::Index n = size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (int d = 0; d <= kd_ && j + d < n; ++d) {
            a(j + d, j) = data_(d, j);
            a(j, j + d) = data_(d, j);
        }
    return a;
}

SymmetricBand SymmetricBand::shifted(const SymmetricBand& other, double sigma) const {
    SymmetricBand out = *this;
    out.data_ -= sigma * other.data_;
    return out;
}

Eigen::VectorXd SymmetricBand::multiply(const Eigen::VectorXd& x) const {
    const Eigen::Index n = size();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        y[j] += data_(0, j) * x[j];
        for (int d = 1; d <= kd_ && j + d < n; ++d) {
            y[j + d] += data_(d, j) * x[j];
            y[j] += data_(d, j) * x[j + d];
        }
    }
    return y;
}

BandLDLT::BandLDLT(const SymmetricBand& a)
    : lower_(Eigen::MatrixXd::Zero(a.bandwidth() + 1, a.size())), diag_(a.size()), kd_(a.bandwidth()) {
    const Eigen::Index n = a.size();
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(1.0, a.data().cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < n; ++j) {
        double dj = a.data()(0, j);
        for (Eigen::Index m = std::max<Eigen::Index>(0, j - kd_); m < j; ++m) {
            const double l = lower_(j - m, m);
            dj -= l * l * diag_[m];
        }
        if (dj == 0) dj = tiny;
        diag_[j] = dj;
        if (dj < 0) ++negatives_;
        for (Eigen::Index i = j + 1; i <= std::min(n - 1, j + kd_); ++i) {
            double v = a.data()(i - j, j);
            for (Eigen::Index m = std::max<Eigen::Index>(0, i - kd_); m < j; ++m)
                v -= lower_(i - m, m) * lower_(j - m, m) * diag_[m];
            lower_(i - j, j) = v / dj;
        }
    }
}

Eigen::VectorXd BandLDLT::solve(const Eigen::VectorXd& b) const {
    const Eigen::Index n = diag_.size();
    Eigen::VectorXd x = b;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i <= std::min(n - 1, j + kd_); ++i) x[i] -= lower_(i - j, j) * x[j];
    x.array() /= diag_.array();
    for (Eigen::Index j = n - 1; j >= 0; --j)
        for (Eigen::Index i = j + 1; i <= std::min(n - 1, j + kd_); ++i) x[j] -= lower_(i - j, j) * x[i];
    return x;
}

int eigenvalues_below(const SymmetricBand& h, const SymmetricBand& s, double sigma) {
    return BandLDLT(h.shifted(s, sigma)).negative_pivots();
}

EigenPairs banded_eigen_below(const SymmetricBand& h, const SymmetricBand& s, double cap, double lower_bound) {
    const Eigen::Index n = h.size();
    const int count = eigenvalues_below(h, s, cap);
    double lo0 = lower_bound;
    for (int guard = 0; eigenvalues_below(h, s, lo0) > 0; ++guard) {
        if (guard > 60) throw SolverError("could not bracket the lowest eigenvalue");
        lo0 -= std::max(1.0, std::abs(lo0));
    }

    EigenPairs out;
    out.values.resize(count);
    out.vectors.resize(n, count);
    const double scale = std::max({std::abs(cap), std::abs(lo0), 1e-300});
    for (int j = 0; j < count; ++j) {
        double lo = j > 0 ? out.values[j - 1] - 1e-12 * scale : lo0;
        double hi = cap;
        while (hi - lo > 4 * std::numeric_limits<double>::epsilon() * scale) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (eigenvalues_below(h, s, mid) > j)
                hi = mid;
            else
                lo = mid;
        }
        out.values[j] = 0.5 * (lo + hi);
    }

    for (int j = 0; j < count; ++j) {
        // shift slightly off the eigenvalue so the factorization stays finite
        const double sigma = out.values[j] + 1e-13 * scale;
        const BandLDLT ldlt(h.shifted(s, sigma));
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(0.7 * double(i) + 0.3 * j);
        for (int it = 0; it < 4; ++it) {
            x = ldlt.solve(s.multiply(x));
            // S-orthogonalize against quasi-degenerate predecessors
            for (int p = 0; p < j; ++p)
                if (std::abs(out.values[p] - out.values[j]) < 1e-8 * scale) {
                    const Eigen::VectorXd sp = s.multiply(out.vectors.col(p));
                    x -= sp.dot(x) * out.vectors.col(p);
                }
            x /= std::sqrt(x.dot(s.multiply(x)));
        }
        out.vectors.col(j) = x;
    }
    return out;
}

}  // namespace qdot
