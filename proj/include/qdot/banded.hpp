#pragma once

// Symmetric band matrices and a Sturm-count (inertia) eigensolver for the
// generalized problem H x = E S x with S positive definite.

#include <utility>

#include <Eigen/Core>

namespace qdot {

/// Lower band storage: data(d, j) = A(j + d, j) for d = 0 .. bandwidth.
class SymmetricBand {
public:
    SymmetricBand() = default;
    SymmetricBand(Eigen::Index n, int bandwidth) : data_(Eigen::MatrixXd::Zero(bandwidth + 1, n)), kd_(bandwidth) {}

    Eigen::Index size() const { return data_.cols(); }
    int bandwidth() const { return kd_; }

    /// Element (i, j); zero outside the band.
    double operator()(Eigen::Index i, Eigen::Index j) const {
        if (i < j) std::swap(i, j);
        return i - j > kd_ ? 0.0 : data_(i - j, j);
    }
    /// Adds v to (i, j) and, implicitly, (j, i). |i - j| must be <= bandwidth.
    void add(Eigen::Index i, Eigen::Index j, double v) {
        if (i < j) std::swap(i, j);
        data_(i - j, j) += v;
    }

    const Eigen::MatrixXd& data() const { return data_; }
    Eigen::MatrixXd dense() const;

    /// this - sigma * other (same shape).
    SymmetricBand shifted(const SymmetricBand& other, double sigma) const;
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

private:
    Eigen::MatrixXd data_;
    int kd_ = 0;
};

/// Unpivoted banded L D L^T. By Sylvester's law the number of negative
/// pivots of H - sigma S equals the number of eigenvalues below sigma.
class BandLDLT {
public:
    explicit BandLDLT(const SymmetricBand& a);

    int negative_pivots() const { return negatives_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
    Eigen::MatrixXd lower_;  // lower_(d, j) = L(j + d, j), d >= 1
    Eigen::VectorXd diag_;
    int kd_;
    int negatives_ = 0;
};

int eigenvalues_below(const SymmetricBand& h, const SymmetricBand& s, double sigma);

struct EigenPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // columns, S-normalized
};

/// All eigenpairs with eigenvalue < cap, located by bisection on the
/// inertia count and refined by inverse iteration. `lower_bound` must lie
/// below the smallest eigenvalue.
EigenPairs banded_eigen_below(const SymmetricBand& h, const SymmetricBand& s, double cap, double lower_bound);

}  // namespace qdot
