#include "mmest/model.hpp"

namespace mmest {

namespace {

std::string shape(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace

const SystemModel& ValidatedModelSet::model(int i) const {
  if (i < 0 || i >= size()) {
    throw IndexOutOfRange("model index " + std::to_string(i) + " outside [0, " +
                          std::to_string(size()) + ")");
  }
  return models_[i];
}

std::vector<Vector> ValidatedModelSet::x0_hats() const {
  std::vector<Vector> out;
  out.reserve(models_.size());
  for (const auto& model : models_) out.push_back(model.x0_hat);
  return out;
}

ValidatedModelSet validate_model_set(const ModelSet& raw, double tol) {
  if (raw.models.empty()) {
    throw EmptySet("model set is empty");
  }

  const Eigen::Index n = raw.models.front().n();
  const Eigen::Index m = raw.models.front().m();

  std::vector<SystemModel> models = raw.models;
  for (std::size_t i = 0; i < models.size(); ++i) {
    SystemModel& model = models[i];
    const std::string tag = "model " + std::to_string(i + 1);

    if (model.F.rows() != n || model.F.cols() != n) {
      throw DimensionMismatch(tag + ": F is " + shape(model.F) + ", expected " +
                              std::to_string(n) + "x" + std::to_string(n));
    }
    if (model.H.rows() != m || model.H.cols() != n) {
      throw DimensionMismatch(tag + ": H is " + shape(model.H) + ", expected " +
                              std::to_string(m) + "x" + std::to_string(n));
    }
    if (model.Q.rows() != n) {
      throw DimensionMismatch(tag + ": Q is " + std::to_string(model.Q.rows()) +
                              "x" + std::to_string(model.Q.rows()) + ", expected " +
                              std::to_string(n) + "x" + std::to_string(n));
    }
    if (model.R.rows() != m) {
      throw DimensionMismatch(tag + ": R is " + std::to_string(model.R.rows()) +
                              "x" + std::to_string(model.R.rows()) + ", expected " +
                              std::to_string(m) + "x" + std::to_string(m));
    }
    if (model.x0_hat.size() == 0) {
      model.x0_hat = Vector::Zero(n);
    } else if (model.x0_hat.size() != n) {
      throw DimensionMismatch(tag + ": x0_hat has length " +
                              std::to_string(model.x0_hat.size()) + ", expected " +
                              std::to_string(n));
    }

    if (!model.F.allFinite() || !model.H.allFinite() || !model.x0_hat.allFinite()) {
      throw NonFiniteEntry(tag + ": F, H or x0_hat contains NaN/Inf");
    }
    if (!model.Q.all_finite() || !model.R.all_finite()) {
      throw NonFiniteEntry(tag + ": Q or R contains NaN/Inf");
    }
    if (!is_positive_definite(model.Q, tol)) {
      throw NotPositiveDefinite(tag + ": Q is not positive definite (min eigenvalue " +
                                std::to_string(model.Q.min_eigenvalue()) + ")");
    }
    if (!is_positive_definite(model.R, tol)) {
      throw NotPositiveDefinite(tag + ": R is not positive definite (min eigenvalue " +
                                std::to_string(model.R.min_eigenvalue()) + ")");
    }
  }

  return ValidatedModelSet(std::move(models), n, m);
}

}  // namespace mmest
