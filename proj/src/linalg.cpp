#include "eds/linalg.hpp"

namespace eds {

int rank_svd(const Eigen::MatrixXd& M, double tol_rel, bool* unstable) {
    if (unstable) *unstable = false;
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cut = tol_rel * s(0);
    int r = 0;
    for (int i = 0; i < s.size(); ++i) {
        if (s(i) > cut) ++r;
        if (unstable && s(i) > cut / 10.0 && s(i) < cut * 10.0) *unstable = true;
    }
    return r;
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& M, double tol_rel) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const int n = static_cast<int>(M.cols());
    const int r = rank_svd(M, tol_rel);
    return svd.matrixV().rightCols(n - r);
}

Eigen::MatrixXd row_space_basis(const Eigen::MatrixXd& M, double tol_rel) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const int r = rank_svd(M, tol_rel);
    return svd.matrixV().leftCols(r);
}

double pfaffian4(const Eigen::Matrix4d& M) {
    return M(0, 1) * M(2, 3) - M(0, 2) * M(1, 3) + M(0, 3) * M(1, 2);
}

PencilCoeffs pfaffian_pencil(const Eigen::Matrix4d& M1, const Eigen::Matrix4d& M2) {
    PencilCoeffs c;
    c.alpha = pfaffian4(M1);
    c.gamma = pfaffian4(M2);
    c.beta = pfaffian4(M1 + M2) - c.alpha - c.gamma;
    return c;
}

Signature signature_sym(const Eigen::MatrixXd& S, double tol_rel) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double mx = 0;
    for (int i = 0; i < ev.size(); ++i) mx = std::max(mx, std::abs(ev(i)));
    Signature sig;
    const double cut = tol_rel * (mx > 0 ? mx : 1.0);
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) > cut) ++sig.pos;
        else if (ev(i) < -cut) ++sig.neg;
        else ++sig.zero;
    }
    return sig;
}

} // namespace eds
