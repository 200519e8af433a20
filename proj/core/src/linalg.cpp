#include "histwalk/linalg.hpp"

#include "histwalk/errors.hpp"

#include <Eigen/Eigenvalues>

namespace histwalk {

HermitianEig hermitian_eig(const Matrix& H) {
    if (H.rows() != H.cols())
        throw config_error("hermitian_eig: matrix is not square (" +
                           std::to_string(H.rows()) + "x" + std::to_string(H.cols()) + ")");
    const double scale = H.cwiseAbs().maxCoeff();
    const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(scale, 1.0))
        throw config_error("hermitian_eig: matrix is not Hermitian (max|H - H^dag| = " +
                           std::to_string(asym) + ")");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
    if (solver.info() != Eigen::Success)
        throw invariant_error("hermitian_eig: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix unitary_exp(const Matrix& H, double s) {
    const HermitianEig eig = hermitian_eig(H);
    const Vector phases =
        (cxd(0, -s) * eig.eigenvalues.cast<cxd>().array()).exp().matrix();
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

Matrix partial_trace_coin(const Matrix& rho) {
    const Eigen::Index dim = rho.rows();
    if (rho.cols() != dim || dim % 2 != 0)
        throw config_error("partial_trace_coin: expected even square dimension, got " +
                           std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()));
    const Eigen::Index n = dim / 2;
    return rho.topLeftCorner(n, n) + rho.bottomRightCorner(n, n);
}

Matrix tensor(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

}  // namespace histwalk
