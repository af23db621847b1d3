#pragma once

#include <string>
#include <vector>

#include "mmest/linalg.hpp"

namespace mmest {

/// One candidate linear model
///   x_{t+1} = F x_t + w_t,   y_t = H x_t + v_t,
/// with positive definite weights Q (on w) and R (on v) and an initial state
/// estimate x0_hat.
struct SystemModel {
  Matrix F;        // n x n state transition
  Matrix H;        // m x n output map
  SymMatrix Q;     // n x n process-disturbance weight
  SymMatrix R;     // m x m measurement-noise weight
  Vector x0_hat;   // length n, defaults to zero

  Eigen::Index n() const { return F.rows(); }
  Eigen::Index m() const { return H.rows(); }
};

/// An unvalidated finite model set.
struct ModelSet {
  std::vector<SystemModel> models;
};

/// A model set that passed validate_model_set: consistent dimensions, every
/// Q_i and R_i symmetric positive definite, all entries finite. Immutable.
class ValidatedModelSet {
 public:
  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }
  int size() const { return static_cast<int>(models_.size()); }
  const std::vector<SystemModel>& models() const { return models_; }
  const SystemModel& model(int i) const;

  /// Initial estimates x0_hat, in model order.
  std::vector<Vector> x0_hats() const;

  friend ValidatedModelSet validate_model_set(const ModelSet& raw, double tol);

 private:
  ValidatedModelSet(std::vector<SystemModel> models, Eigen::Index n, Eigen::Index m)
      : models_(std::move(models)), n_(n), m_(m) {}

  std::vector<SystemModel> models_;
  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
};

/// Validates dimensions and definiteness of a raw set.
/// Throws EmptySet, DimensionMismatch, NonFiniteEntry, or NotPositiveDefinite
/// (naming the offending model and matrix).
ValidatedModelSet validate_model_set(const ModelSet& raw,
                                     double tol = defaults::kDefinitenessTol);

}  // namespace mmest
