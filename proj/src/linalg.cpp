#include "spectral/linalg.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace spectral {

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A) {
    if (A.rows() > 0 && (A - A.transpose()).cwiseAbs().maxCoeff() < 1e-14 * (1.0 + A.cwiseAbs().maxCoeff())) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
               es.eigenvectors().transpose();
    }
    return A.exp();
}

std::pair<double, double> signed_logdet(const Eigen::MatrixXd& A) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double sign = lu.permutationP().determinant() > 0 ? 1.0 : -1.0;
    double logdet = 0.0;
    auto diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        double d = diag(i);
        if (d < 0) sign = -sign;
        logdet += std::log(std::abs(d));
    }
    return {sign, logdet};
}

}  // namespace spectral
