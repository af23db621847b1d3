#include "mmest/backward.hpp"

#include <cmath>
#include <limits>

namespace mmest {

namespace {

/// -[W, -W; -W, W] / gamma^2 for an n x n symmetric W.
SymMatrix difference_terminal(const SymMatrix& W, double gamma) {
  const Eigen::Index n = W.rows();
  Matrix t(2 * n, 2 * n);
  t.topLeftCorner(n, n) = -W.mat();
  t.topRightCorner(n, n) = W.mat();
  t.bottomLeftCorner(n, n) = W.mat();
  t.bottomRightCorner(n, n) = -W.mat();
  return SymMatrix(t / (gamma * gamma));
}

double max_stationary_eigenvalue(const std::vector<StationarySolution>& stat) {
  double lambda = -std::numeric_limits<double>::infinity();
  for (const auto& s : stat) lambda = std::max(lambda, s.P.max_eigenvalue());
  return lambda;
}

void require_feasible(const std::vector<StationarySolution>& stat, double gamma) {
  const double lambda = max_stationary_eigenvalue(stat);
  if (!(gamma * gamma > lambda)) {
    throw InfeasibleGamma("gamma = " + std::to_string(gamma) +
                          " violates gamma^2 I > P_i (max eigenvalue " +
                          std::to_string(lambda) + ")");
  }
}

void check_pair_index(const std::vector<StationarySolution>& stat, int i, int j) {
  const int M = static_cast<int>(stat.size());
  if (i < 0 || i >= M || j < 0 || j >= M) {
    throw IndexOutOfRange("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside [0, " + std::to_string(M) + ")");
  }
}

}  // namespace

BackwardStep backward_step_system(const BackwardSystem& sys, const SymMatrix& T_next) {
  if (T_next.rows() != sys.F.rows()) {
    throw DimensionMismatch("backward step: T_next is " + std::to_string(T_next.rows()) +
                            "x" + std::to_string(T_next.rows()) + ", expected " +
                            std::to_string(sys.F.rows()));
  }
  const SymMatrix X(sys.K.transpose() * T_next.mat() * sys.K + sys.R.mat());
  const SymMatrix X_inv = sym_inverse(X);  // throws SingularX at the boundary
  const Matrix L = X_inv.mat() * (sys.K.transpose() * T_next.mat() * sys.F - sys.N);
  const SymMatrix T(sys.F.transpose() * T_next.mat() * sys.F + sys.Q.mat() -
                    L.transpose() * X.mat() * L);
  return BackwardStep{X, L, T};
}

BackwardRun run_backward_system(const BackwardSystem& sys, const SymMatrix& T_N, int N,
                                double tol) {
  BackwardRun run;
  run.T0 = T_N;
  if (N < 0) {
    throw ValidationError("run_backward: negative horizon");
  }
  run.X_trace.reserve(N);
  SymMatrix T = T_N;
  for (int t = N - 1; t >= 0; --t) {
    BackwardStep step;
    try {
      step = backward_step_system(sys, T);
    } catch (const SingularX&) {
      run.fails_at = t;
      run.all_definite = false;
      run.T0 = T;
      return run;
    }
    run.X_trace.push_back(step.X);
    if (!is_positive_definite(step.X, tol)) {
      run.fails_at = t;
      run.all_definite = false;
      run.T0 = step.T;
      return run;
    }
    T = step.T;
  }
  run.all_definite = true;
  run.fails_at = -1;
  run.T0 = T;
  return run;
}

BackwardSystem PairSystem::game() const {
  BackwardSystem sys;
  sys.F = Fij;
  sys.K = Kij;
  sys.R = SymMatrix(Rtilde_i_inv.mat() + Rtilde_j_inv.mat());
  Matrix N(Hi.rows(), Fij.cols());
  N.leftCols(Hi.cols()) = Rtilde_i_inv.mat() * Hi;
  N.rightCols(Hj.cols()) = Rtilde_j_inv.mat() * Hj;
  sys.N = N;
  sys.Q = SymMatrix(block_diag(Hi.transpose() * Rtilde_i_inv.mat() * Hi,
                               Hj.transpose() * Rtilde_j_inv.mat() * Hj));
  return sys;
}

PairSystem build_pair(const ValidatedModelSet& set,
                      const std::vector<StationarySolution>& stat, int i, int j) {
  check_pair_index(stat, i, j);
  const SystemModel& mi = set.model(i);
  const SystemModel& mj = set.model(j);
  const StationarySolution& si = stat[i];
  const StationarySolution& sj = stat[j];

  PairSystem pair;
  pair.i = i;
  pair.j = j;
  pair.Fij = block_diag(mi.F - si.K * mi.H, mj.F - sj.K * mj.H);
  pair.Kij = vstack(si.K, sj.K);
  pair.Rtilde_i_inv = spd_inverse(si.Rtilde, "Rtilde_i");
  pair.Rtilde_j_inv = spd_inverse(sj.Rtilde, "Rtilde_j");
  pair.Hi = mi.H;
  pair.Hj = mj.H;
  return pair;
}

SymMatrix default_qunder(const std::vector<StationarySolution>& stat, double gamma) {
  require_feasible(stat, gamma);
  const double lambda = max_stationary_eigenvalue(stat);
  const double scale = 1.0 - lambda / (gamma * gamma);
  if (scale <= defaults::kDefinitenessTol) {
    throw InfeasibleGamma("gamma = " + std::to_string(gamma) +
                          " leaves no positive definite margin for Qunder");
  }
  const Eigen::Index n = stat.front().P.rows();
  return SymMatrix(scale * Matrix::Identity(n, n));
}

SymMatrix terminal_sufficient(const std::vector<StationarySolution>& stat, int i, int j,
                              double gamma, const std::optional<SymMatrix>& Qunder) {
  check_pair_index(stat, i, j);
  require_feasible(stat, gamma);
  SymMatrix Qu = Qunder ? *Qunder : default_qunder(stat, gamma);
  if (!is_positive_definite(Qu)) {
    throw InvalidQunder("Qunder is not positive definite");
  }
  const Eigen::Index n = stat.front().P.rows();
  if (Qu.rows() != n) {
    throw InvalidQunder("Qunder has wrong dimension");
  }
  for (std::size_t k = 0; k < stat.size(); ++k) {
    const SymMatrix slack(Matrix::Identity(n, n) - stat[k].P.mat() / (gamma * gamma) -
                          Qu.mat());
    if (!is_positive_semidefinite(slack, 1e-12)) {
      throw InvalidQunder("Qunder does not satisfy Qunder <= I - gamma^{-2} P for model " +
                          std::to_string(k + 1));
    }
  }
  return difference_terminal(spd_inverse(Qu, "Qunder"), gamma);
}

SymMatrix terminal_necessary(const std::vector<StationarySolution>& stat, int i, int j,
                             double gamma) {
  check_pair_index(stat, i, j);
  require_feasible(stat, gamma);
  const Eigen::Index n = stat.front().P.rows();
  const SymMatrix sum(2.0 * Matrix::Identity(n, n) -
                      (stat[i].P.mat() + stat[j].P.mat()) / (gamma * gamma));
  return difference_terminal(spd_inverse(sum, "2I - gamma^{-2}(P_i + P_j)"), gamma);
}

PairCertificate run_backward(const PairSystem& pair, const SymMatrix& T_N, int N,
                             double tol) {
  const BackwardRun run = run_backward_system(pair.game(), T_N, N, tol);
  PairCertificate cert;
  cert.i = pair.i;
  cert.j = pair.j;
  cert.gamma = std::numeric_limits<double>::quiet_NaN();
  cert.T0 = run.T0;
  cert.X_trace = run.X_trace;
  cert.all_definite = run.all_definite;
  cert.fails_at = run.fails_at;
  return cert;
}

PairCertificate certify_pair(const PairSystem& pair,
                             const std::vector<StationarySolution>& stat, double gamma,
                             TerminalKind kind, int N,
                             const std::optional<SymMatrix>& Qunder, double tol) {
  const SymMatrix T_N = kind == TerminalKind::kSufficient
                            ? terminal_sufficient(stat, pair.i, pair.j, gamma, Qunder)
                            : terminal_necessary(stat, pair.i, pair.j, gamma);
  PairCertificate cert = run_backward(pair, T_N, N, tol);
  cert.gamma = gamma;
  cert.terminal_kind = kind;
  return cert;
}

}  // namespace mmest
