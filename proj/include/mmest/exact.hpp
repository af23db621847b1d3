#pragma once

#include "mmest/bounds.hpp"

namespace mmest {

/// The theta-weighted stacked system behind the exact game value: all M
/// closed-loop filters run in parallel, the stage cost is the theta-convex
/// combination of the per-model innovation residuals, and the terminal weight
/// QN is the (indefinite) interpolation excess built from
/// Q_{N,i} = (I - gamma^{-2} P_i)^{-1}.
struct StackedSystem {
  Vector theta;     // length M, on the closed probability simplex
  Matrix Fstack;    // Mn x Mn block diagonal of F_i - K_i H_i
  Matrix Kstack;    // Mn x m stacked gains
  SymMatrix Qbar;   // Mn x Mn stage weight, blkdiag(theta_i H_i^T Rt_i^{-1} H_i)
  Matrix Nbar;      // m x Mn cross weight, [theta_i Rt_i^{-1} H_i]
  SymMatrix Rbar;   // m x m stage weight, sum theta_i Rt_i^{-1}
  SymMatrix QN;     // Mn x Mn terminal weight

  /// Game weights; terminal for the backward run is -QN / gamma^2.
  BackwardSystem game() const;
};

StackedSystem stacked_weights(const ValidatedModelSet& set,
                              const std::vector<StationarySolution>& stat,
                              const Vector& theta, double gamma);

struct LqrValue {
  bool finite = false;
  double J = 0.0;   // +inf when not finite
  int fails_at = -1;
};

/// Value of the inner sequential game at a fixed theta: runs the stacked
/// backward recursion from T_N = -QN/gamma^2; finite iff every X_t stays
/// positive definite, in which case J = -gamma^2 |x0_stack|^2_{T_0} with
/// x0_stack the stack of the x0_hats.
LqrValue lqr_value(const ValidatedModelSet& set,
                   const std::vector<StationarySolution>& stat, const Vector& theta,
                   double gamma, int N, const std::vector<Vector>& x0_hats,
                   double tol = defaults::kDefinitenessTol);

struct ExactValueResult {
  double gamma = 0.0;
  double theta_grid_step = 0.0;
  bool finite = false;
  double J = 0.0;
  Vector argmax_theta;
};

/// Exact optimal performance level for M = 2 (UnsupportedM otherwise):
///   gamma*_N = inf { gamma : the stacked value is finite for every grid theta },
/// bisected to +-gamma_tol over the theta grid {0, step, ..., 1}. The result
/// carries the grid maximum of J and its argmax at the returned gamma.
/// Throws NoUpperBound past `cap`.
ExactValueResult exact_gamma(const ValidatedModelSet& set,
                             const std::vector<StationarySolution>& stat, int N,
                             double gamma_tol = defaults::kBisectionTol,
                             double theta_step = defaults::kThetaStep,
                             double cap = defaults::kGammaCap,
                             double tol = defaults::kDefinitenessTol);

/// argmin / min of sum_k |x - z_k|^2_{Z_k} for symmetric Z_k with positive
/// definite sum (SingularSum otherwise):
///   x* = (sum Z_k)^{-1} sum Z_k z_k,
///   min = sum |z_k|^2_{Z_k} - |sum Z_k z_k|^2_{(sum Z_k)^{-1}}.
struct InterpolationMin {
  Vector minimizer;
  double value = 0.0;
};

InterpolationMin interpolate_min(const std::vector<Vector>& zs,
                                 const std::vector<SymMatrix>& Zs);

/// Right-hand side of the weighted quadratic-program identity: with
/// z_i = X_i^{-1} x_i and S = sum theta_i X_i^{-1},
///   sum_i theta_i ( |z_i|^2_{X_i - S^{-1}}
///                   + (1/2) sum_j theta_j |z_i - z_j|^2_{S^{-1}} ),
/// which equals min_v sum_i theta_i |v - x_i|^2_{X_i^{-1}}.
/// Requires every X_i positive definite and theta in the open simplex.
double quad_prog_value(const std::vector<Vector>& xs, const std::vector<SymMatrix>& Xs,
                       const Vector& theta);

/// Solution of min over x of max over i of { |x - xb_i|^2_{Q_i} - penalty_i }
/// through its concave dual over the probability simplex, evaluated on a grid
/// of step `theta_step` and refined (golden section for M = 2, coordinate-pair
/// ascent otherwise). Returns x = (sum theta_i Q_i)^{-1} sum theta_i Q_i xb_i
/// at the maximizer.
struct MinimaxInterpolation {
  Vector x_hat;
  double value = 0.0;
  Vector theta_star;
};

MinimaxInterpolation minimax_interpolation(const std::vector<Vector>& x_breves,
                                           const std::vector<SymMatrix>& Q_weights,
                                           const std::vector<double>& penalties,
                                           double theta_step = defaults::kThetaStep);

}  // namespace mmest
