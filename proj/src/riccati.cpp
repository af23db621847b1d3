#include "mmest/riccati.hpp"

#include <cmath>
#include <limits>

namespace mmest {

RiccatiStep riccati_step(const SystemModel& model, const SymMatrix& P) {
  const Matrix& F = model.F;
  const Matrix& H = model.H;

  const SymMatrix innovation(model.R.mat() + H * P.mat() * H.transpose());
  const double inn_scale = 1.0 + max_abs(innovation.mat());
  const Vector inn_eigs = innovation.eigenvalues();
  if (inn_eigs.cwiseAbs().minCoeff() <= 1e-12 * inn_scale) {
    throw SingularInnovation("riccati_step: R + H P H^T is numerically singular");
  }

  Eigen::LLT<Matrix> llt(innovation.mat());
  if (llt.info() != Eigen::Success) {
    throw SingularInnovation("riccati_step: R + H P H^T is not positive definite");
  }
  // K = F P H^T (R + H P H^T)^{-1}, via the transposed solve.
  const Matrix K = llt.solve(H * P.mat() * F.transpose()).transpose();

  const SymMatrix P_next(model.Q.mat() + F * P.mat() * F.transpose() -
                         K * innovation.mat() * K.transpose());
  return RiccatiStep{K, P_next};
}

StationarySolution solve_stationary(const SystemModel& model, double tol, int max_iter) {
  // Iterates stay bounded for every convergent model; beyond this the
  // recursion is declared divergent rather than looping to max_iter.
  constexpr double kDivergenceTrace = 1e12;

  SymMatrix P = model.Q;
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= max_iter; ++iter) {
    RiccatiStep step = riccati_step(model, P);
    residual = max_abs(step.P_next.mat() - P.mat());
    P = step.P_next;
    if (!P.all_finite() || P.mat().trace() > kDivergenceTrace) {
      throw NoConvergence("solve_stationary: iterates diverged (trace above 1e12)",
                          residual, iter);
    }
    if (residual <= tol) {
      StationarySolution out;
      out.P = P;
      out.K = riccati_step(model, P).K;
      out.Rtilde = SymMatrix(model.R.mat() + model.H * P.mat() * model.H.transpose());
      out.residual = residual;
      out.iterations = iter;
      return out;
    }
  }
  throw NoConvergence("solve_stationary: no fixed point within " +
                          std::to_string(max_iter) + " iterations (last residual " +
                          std::to_string(residual) + ")",
                      residual, max_iter);
}

std::vector<StationarySolution> solve_all_stationary(const ValidatedModelSet& set,
                                                     double tol, int max_iter) {
  std::vector<StationarySolution> out;
  out.reserve(set.size());
  for (int i = 0; i < set.size(); ++i) {
    try {
      out.push_back(solve_stationary(set.model(i), tol, max_iter));
    } catch (const NoConvergence& e) {
      throw NoConvergence("model " + std::to_string(i + 1) + ": " + e.what(),
                          e.last_residual, e.iterations);
    }
  }
  return out;
}

}  // namespace mmest
