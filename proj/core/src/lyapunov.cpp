#include "switchquad/lyapunov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "switchquad/error.hpp"

namespace switchquad::control {
namespace {

Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index n) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

}  // namespace

double spectral_abscissa(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues().real().maxCoeff();
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() > 0.0;
}

Mat8 build_closed_loop(const Mat4& k1, const Mat4& k2) {
  if (!is_positive_definite(k1)) throw SynthesisError("K1 is not positive definite");
  if (!is_positive_definite(k2)) throw SynthesisError("K2 is not positive definite");
  Mat8 a = Mat8::Zero();
  a.topRightCorner<4, 4>() = Mat4::Identity();
  a.bottomLeftCorner<4, 4>() = -k1;
  a.bottomRightCorner<4, 4>() = -k2;
  if (!(spectral_abscissa(a) < 0.0)) throw SynthesisError("closed-loop matrix is not Hurwitz");
  return a;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    throw SynthesisError("solve_lyapunov: dimension mismatch");
  }
  if (!a.allFinite()) throw SynthesisError("solve_lyapunov: non-finite A");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + q.cwiseAbs().maxCoeff())) {
    throw SynthesisError("solve_lyapunov: Q is not symmetric");
  }
  if (!is_positive_definite(q)) throw SynthesisError("solve_lyapunov: Q is not positive definite");
  if (!(spectral_abscissa(a) < 0.0)) throw SynthesisError("solve_lyapunov: A is not Hurwitz");

  // Column-major vec: vec(A^T P) = (I (x) A^T) vec(P), vec(P A) = (A^T (x) I) vec(P).
  const Eigen::MatrixXd at = a.transpose();
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kron.block(i * n, i * n, n, n) += at;
    for (Eigen::Index j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n).diagonal().array() += at(i, j);
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(kron);
  if (!lu.isInvertible()) throw SynthesisError("solve_lyapunov: singular Kronecker system");

  const Eigen::VectorXd rhs = -vec(q);
  Eigen::VectorXd x = lu.solve(rhs);
  x += lu.solve(rhs - kron * x);

  Eigen::MatrixXd p = unvec(x, n);
  p = (0.5 * (p + p.transpose())).eval();
  if (!is_positive_definite(p)) throw SynthesisError("solve_lyapunov: solution is not positive definite");
  return p;
}

double lyapunov_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& p,
                         const Eigen::MatrixXd& q) {
  return (a.transpose() * p + p * a + q).norm();
}

}  // namespace switchquad::control
