#pragma once

#include <memory>

#include "mmest/exact.hpp"

namespace mmest {

/// Per-step output of the minimax estimator: the interpolated estimate, the
/// attained min-max value, the maximizing dual weights, and the per-model
/// objectives |x_hat - xb_i|^2_{(I - gamma^{-2} P_i)^{-1}} - gamma^2 c_i
/// evaluated at x_hat.
struct EstimateReport {
  int t = 0;
  Vector x_hat;
  double game_value = 0.0;
  Vector theta_star;
  std::vector<double> per_model_costs;
};

/// The bank of M stationary Kalman filters with residual-cost accumulators:
///   xb_{t+1,i} = F_i xb_{t,i} + K_i (y_t - H_i xb_{t,i})
///   c_{t+1,i}  = |H_i xb_{t,i} - y_t|^2_{Rtilde_i^{-1}} + c_{t,i}
/// A bank is a value: step() returns the advanced copy and never mutates.
class FilterBank {
 public:
  /// Bank at t = 0 with xb_{0,i} = x0_hats[i] and c = 0. Requires
  /// gamma > feasibility_floor (InfeasibleGamma otherwise).
  static FilterBank create(const ValidatedModelSet& set,
                           const std::vector<StationarySolution>& stat, double gamma,
                           const std::vector<Vector>& x0_hats);

  FilterBank step(const Vector& y) const;

  /// Minimax estimate at the current time, solved through the dual theta
  /// parametrization (minimax_interpolation) with weights (I - g^-2 P_i)^-1
  /// and penalties gamma^2 c_i.
  EstimateReport estimate(double theta_step = defaults::kThetaStep) const;

  int t() const { return t_; }
  double gamma() const;
  int size() const;
  const std::vector<Vector>& x_breve() const { return x_breve_; }
  const std::vector<double>& costs() const { return c_; }

 private:
  struct Bankshared;
  FilterBank() = default;

  std::shared_ptr<const Bankshared> shared_;
  int t_ = 0;
  std::vector<Vector> x_breve_;
  std::vector<double> c_;
};

/// Spec-facing alias of FilterBank::create.
FilterBank new_bank(const ValidatedModelSet& set,
                    const std::vector<StationarySolution>& stat, double gamma,
                    const std::vector<Vector>& x0_hats);

/// Replays a measurement sequence, reporting the estimate at t = 0 and after
/// every step (|ys| + 1 reports).
std::vector<EstimateReport> run_sequence(const ValidatedModelSet& set,
                                         const std::vector<StationarySolution>& stat,
                                         double gamma,
                                         const std::vector<Vector>& x0_hats,
                                         const std::vector<Vector>& ys,
                                         double theta_step = defaults::kThetaStep);

}  // namespace mmest
