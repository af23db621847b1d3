#include "mmest/linalg.hpp"

#include <cmath>

namespace mmest {

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("SymMatrix: expected a square matrix, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  data_ = 0.5 * (a + a.transpose());
}

Vector SymMatrix::eigenvalues() const {
  if (!all_finite()) {
    throw NonFiniteEntry("eigenvalues: matrix contains NaN or Inf entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool is_positive_definite(const SymMatrix& a, double tol) {
  return a.min_eigenvalue() > tol;
}

bool is_negative_definite(const SymMatrix& a, double tol) {
  return is_positive_definite(SymMatrix(-a.mat()), tol);
}

bool is_positive_semidefinite(const SymMatrix& a, double tol) {
  return a.min_eigenvalue() >= -tol;
}

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

SymMatrix spd_inverse(const SymMatrix& a, const std::string& label) {
  Eigen::LLT<Matrix> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_inverse: " + label + " is not positive definite");
  }
  const Eigen::Index n = a.rows();
  return SymMatrix(llt.solve(Matrix::Identity(n, n)));
}

SymMatrix sym_inverse(const SymMatrix& a) {
  if (!a.all_finite()) {
    throw NonFiniteEntry("sym_inverse: matrix contains NaN or Inf entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  const Vector& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  const double smallest = ev.cwiseAbs().minCoeff();
  if (smallest <= 1e-10 * (1.0 + largest)) {
    throw SingularX("sym_inverse: matrix is numerically singular (min |eig| = " +
                    std::to_string(smallest) + ")");
  }
  Matrix inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
               es.eigenvectors().transpose();
  return SymMatrix(inv);
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a;
  out.bottomRows(b.rows()) = b;
  return out;
}

}  // namespace mmest
