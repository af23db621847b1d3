#pragma once

#include <vector>

#include "mmest/model.hpp"

namespace mmest {

/// One step of the predictive Riccati recursion:
///   K      = F P H^T (R + H P H^T)^{-1}
///   P_next = Q + F P F^T - K (R + H P H^T) K^T
struct RiccatiStep {
  Matrix K;
  SymMatrix P_next;
};

RiccatiStep riccati_step(const SystemModel& model, const SymMatrix& P);

/// Stationary solution of the forward recursion for one model: the fixed
/// point P, its gain K, and the innovation weight Rtilde = R + H P H^T.
struct StationarySolution {
  SymMatrix P;
  Matrix K;
  SymMatrix Rtilde;
  double residual = 0.0;  // max|P_next - P| at the accepted iterate
  int iterations = 0;
};

/// Fixed-point iteration of riccati_step starting from P = Q, accepted once
/// max|P_next - P| <= tol. Throws NoConvergence when max_iter is exhausted or
/// the iterates diverge (unbounded trace).
StationarySolution solve_stationary(const SystemModel& model,
                                    double tol = defaults::kStationaryTol,
                                    int max_iter = defaults::kStationaryMaxIter);

/// solve_stationary for every model, in model order. NoConvergence is
/// re-thrown with the offending model index in the message.
std::vector<StationarySolution> solve_all_stationary(
    const ValidatedModelSet& set,
    double tol = defaults::kStationaryTol,
    int max_iter = defaults::kStationaryMaxIter);

}  // namespace mmest
