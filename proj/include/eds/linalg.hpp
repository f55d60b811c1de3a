#pragma once

#include <Eigen/Dense>

namespace eds {

// Numerical rank with relative singular value threshold tol_rel * sigma_max.
// If unstable is non-null it is set when some singular value lies within a
// factor of 10 of the cut, i.e. the rank decision is fragile.
int rank_svd(const Eigen::MatrixXd& M, double tol_rel = 1e-9, bool* unstable = nullptr);

// Columns form an orthonormal basis of ker M.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& M, double tol_rel = 1e-9);

// Columns form an orthonormal basis of the row space of M.
Eigen::MatrixXd row_space_basis(const Eigen::MatrixXd& M, double tol_rel = 1e-9);

// Pfaffian of an antisymmetric 4x4 matrix.
double pfaffian4(const Eigen::Matrix4d& M);

struct PencilCoeffs {
    double alpha, beta, gamma;
    double disc() const { return beta * beta - 4.0 * alpha * gamma; }
};

// Pf(l*M1 + m*M2) = alpha*l^2 + beta*l*m + gamma*m^2 for antisymmetric 4x4 pairs.
PencilCoeffs pfaffian_pencil(const Eigen::Matrix4d& M1, const Eigen::Matrix4d& M2);

struct Signature {
    int pos = 0, neg = 0, zero = 0;
    bool operator==(const Signature& o) const {
        return pos == o.pos && neg == o.neg && zero == o.zero;
    }
};

// Eigenvalue signature of a symmetric matrix, zero cut at tol_rel * max|eig|.
Signature signature_sym(const Eigen::MatrixXd& S, double tol_rel = 1e-9);

} // namespace eds
