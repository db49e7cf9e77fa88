#pragma once

#include <Eigen/Dense>

#include "switchquad/types.hpp"

namespace switchquad::control {

/// Block-companion error dynamics matrix [0 I; -K1 -K2]. Throws SynthesisError if either gain
/// is not positive definite or the result is not Hurwitz.
Mat8 build_closed_loop(const Mat4& k1, const Mat4& k2);

/// Largest real part of the eigenvalues of `a`.
double spectral_abscissa(const Eigen::MatrixXd& a);

bool is_positive_definite(const Eigen::MatrixXd& m);

/// Solves A^T P + P A = -Q for symmetric positive definite P.
///
/// Uses the Kronecker-vectorized form (I (x) A^T + A^T (x) I) vec(P) = -vec(Q) with a full-pivot
/// LU factorization, followed by one step of iterative refinement. Throws SynthesisError if A
/// is not Hurwitz, Q is not symmetric positive definite, or the linear system is singular.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

/// Frobenius norm of A^T P + P A + Q.
double lyapunov_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& p,
                         const Eigen::MatrixXd& q);

}  // namespace switchquad::control
