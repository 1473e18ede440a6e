#pragma once

#include <Eigen/Dense>
#include <utility>

namespace spectral {

// Matrix exponential: symmetric matrices go through the self-adjoint
// eigensolver, everything else through scaling-and-squaring with Pade
// approximants.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A);

// (sign, log|det|) via pivoted LU; avoids overflow for large sections.
std::pair<double, double> signed_logdet(const Eigen::MatrixXd& A);

}  // namespace spectral
