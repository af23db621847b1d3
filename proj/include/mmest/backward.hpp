#pragma once

#include <optional>
#include <vector>

#include "mmest/riccati.hpp"

namespace mmest {

/// Weights of a finite-horizon quadratic game over the measurement sequence:
/// closed-loop dynamics xs_{t+1} = F xs_t + K y_t and value recursion
///   X_t = K^T T_{t+1} K + R
///   L_t = X_t^{-1} (K^T T_{t+1} F - N)
///   T_t = F^T T_{t+1} F + Q - L_t^T X_t L_t
/// run backward from a symmetric terminal T_N. The game value is finite
/// exactly when every X_t stays positive definite, in which case it equals
/// -gamma^2 |xs_0|^2_{T_0}. The same recursion serves the model-pair
/// certificates and the theta-stacked exact computation; only the weight
/// assembly differs.
struct BackwardSystem {
  Matrix F;     // d x d, block-diagonal closed loops
  Matrix K;     // d x m, stacked gains
  SymMatrix Q;  // d x d stage weight
  Matrix N;     // m x d stage cross weight
  SymMatrix R;  // m x m stage weight, positive definite
};

struct BackwardStep {
  SymMatrix X;  // m x m
  Matrix L;     // m x d
  SymMatrix T;  // d x d
};

/// One backward step. Throws SingularX when X is numerically singular
/// (min |eigenvalue| <= 1e-10 (1 + max |eigenvalue|)); positive definiteness
/// of X is the caller's certificate check, not a precondition here.
BackwardStep backward_step_system(const BackwardSystem& sys, const SymMatrix& T_next);

struct BackwardRun {
  bool all_definite = false;
  int fails_at = -1;                // first t (largest, scanning N-1..0) with X_t not PD
  SymMatrix T0;                     // T_0 when all_definite; last computed T otherwise
  std::vector<SymMatrix> X_trace;   // X_t in computed order t = N-1, N-2, ...
};

/// Runs N backward steps, stopping at the first X_t that is not positive
/// definite (or is singular). For N = 0 the run is vacuous: T0 = T_N.
BackwardRun run_backward_system(const BackwardSystem& sys, const SymMatrix& T_N, int N,
                                double tol = defaults::kDefinitenessTol);

/// Closed loop of a pair (i, j) of stationary Kalman filters:
///   Fij = blkdiag(F_i - K_i H_i, F_j - K_j H_j),  Kij = [K_i; K_j].
struct PairSystem {
  int i = 0;  // 0-based model indices; i == j is allowed
  int j = 0;
  Matrix Fij;                // 2n x 2n
  Matrix Kij;                // 2n x m
  SymMatrix Rtilde_i_inv;    // m x m
  SymMatrix Rtilde_j_inv;    // m x m
  Matrix Hi;                 // m x n
  Matrix Hj;                 // m x n

  /// The assembled game weights for this pair.
  BackwardSystem game() const;
};

PairSystem build_pair(const ValidatedModelSet& set,
                      const std::vector<StationarySolution>& stat, int i, int j);

enum class TerminalKind { kSufficient, kNecessary };

/// Largest feasible multiple of the identity for the sufficient terminal:
/// (1 - gamma^{-2} max_k lambda_max(P_k)) I. Throws InfeasibleGamma when
/// gamma^2 I > P_k fails for some k.
SymMatrix default_qunder(const std::vector<StationarySolution>& stat, double gamma);

/// Terminal state of the sufficient condition,
///   T_N = -[Qu^{-1}, -Qu^{-1}; -Qu^{-1}, Qu^{-1}] / gamma^2,
/// where Qu is positive definite with Qu <= I - gamma^{-2} P_k for every k
/// (checked; InvalidQunder otherwise). Defaults to default_qunder.
SymMatrix terminal_sufficient(const std::vector<StationarySolution>& stat, int i, int j,
                              double gamma,
                              const std::optional<SymMatrix>& Qunder = std::nullopt);

/// Terminal state of the necessary condition with
/// Qij = (2I - gamma^{-2} (P_i + P_j))^{-1}.
SymMatrix terminal_necessary(const std::vector<StationarySolution>& stat, int i, int j,
                             double gamma);

/// The definiteness convention a certificate is issued under. There is one:
/// the game value is finite iff every X_t is positive definite (validated
/// against the dense quadratic-form oracle in the test suite). Carried
/// explicitly so downstream consumers never have to guess the sign reading.
enum class SignConvention { kValueFiniteIffXPositiveDefinite };

/// Definiteness certificate of one pairwise backward run.
struct PairCertificate {
  int i = 0;
  int j = 0;
  double gamma = 0.0;
  TerminalKind terminal_kind = TerminalKind::kSufficient;
  SymMatrix T0;
  std::vector<SymMatrix> X_trace;  // t = N-1 down to the stop point
  bool all_definite = false;
  int fails_at = -1;
  SignConvention sign_convention = SignConvention::kValueFiniteIffXPositiveDefinite;
};

/// Runs the pair recursion from a caller-supplied terminal.
PairCertificate run_backward(const PairSystem& pair, const SymMatrix& T_N, int N,
                             double tol = defaults::kDefinitenessTol);

/// Convenience: terminal assembly + backward run, with gamma and kind stamped
/// into the certificate.
PairCertificate certify_pair(const PairSystem& pair,
                             const std::vector<StationarySolution>& stat, double gamma,
                             TerminalKind kind, int N,
                             const std::optional<SymMatrix>& Qunder = std::nullopt,
                             double tol = defaults::kDefinitenessTol);

}  // namespace mmest
