#pragma once

#include <Eigen/Dense>

#include "mmest/errors.hpp"

namespace mmest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Library-wide default tolerances. Every predicate that uses one of these
/// also accepts it as a parameter; the constants only fix the defaults.
namespace defaults {
inline constexpr double kDefinitenessTol = 1e-9;  // absolute eigenvalue floor
inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kStationaryTol = 1e-10;
inline constexpr int kStationaryMaxIter = 100000;
inline constexpr double kBisectionTol = 1e-3;
inline constexpr double kThetaStep = 1e-3;
inline constexpr double kGammaCap = 1e6;
}  // namespace defaults

/// Symmetric real matrix. The stored data is explicitly symmetrized on
/// construction, (A + A^T)/2, so downstream recursions cannot accumulate
/// asymmetry; after construction max|A - A^T| <= 1e-12 holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Symmetrizes `a`. Throws DimensionMismatch if `a` is not square.
  explicit SymMatrix(const Matrix& a);

  /// Identity / zero factories.
  static SymMatrix Identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix Zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }

  const Matrix& mat() const { return data_; }
  Eigen::Index rows() const { return data_.rows(); }
  double operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  bool all_finite() const { return data_.allFinite(); }

  /// Eigenvalues in ascending order (self-adjoint solver).
  /// Throws NonFiniteEntry if the matrix holds NaN/Inf.
  Vector eigenvalues() const;

  double min_eigenvalue() const { return eigenvalues()(0); }
  double max_eigenvalue() const {
    Vector ev = eigenvalues();
    return ev(ev.size() - 1);
  }

 private:
  Matrix data_;
};

/// True iff the smallest eigenvalue of `a` exceeds `tol` (an absolute floor).
bool is_positive_definite(const SymMatrix& a, double tol = defaults::kDefinitenessTol);

/// Equivalent to is_positive_definite(-a, tol).
bool is_negative_definite(const SymMatrix& a, double tol = defaults::kDefinitenessTol);

/// Positive semidefinite up to `tol` slack: smallest eigenvalue >= -tol.
bool is_positive_semidefinite(const SymMatrix& a, double tol = defaults::kDefinitenessTol);

/// max |a_ij| (used for fixed-point residuals and symmetry checks).
double max_abs(const Matrix& a);

/// Inverse of a symmetric positive definite matrix via Cholesky.
/// Throws NotPositiveDefinite when the factorization fails.
SymMatrix spd_inverse(const SymMatrix& a, const std::string& label = "matrix");

/// Inverse of a symmetric (possibly indefinite) invertible matrix through its
/// eigendecomposition. Throws SingularX when min|eigenvalue| is below
/// 1e-10 * (1 + max|eigenvalue|).
SymMatrix sym_inverse(const SymMatrix& a);

/// [A 0; 0 B] for square blocks.
Matrix block_diag(const Matrix& a, const Matrix& b);

/// Stacks blocks vertically: [A; B].
Matrix vstack(const Matrix& a, const Matrix& b);

}  // namespace mmest
