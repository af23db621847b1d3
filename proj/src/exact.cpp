#include "mmest/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mmest {

namespace {

void check_theta(const Vector& theta, int M, bool open_simplex) {
  if (theta.size() != M) {
    throw DimensionMismatch("theta has length " + std::to_string(theta.size()) +
                            ", expected " + std::to_string(M));
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (open_simplex ? (theta(i) <= 0.0 || theta(i) >= 1.0) : theta(i) < 0.0) {
      throw DegenerateTheta("theta(" + std::to_string(i) + ") = " +
                            std::to_string(theta(i)) + " outside the " +
                            (open_simplex ? std::string("open") : std::string("closed")) +
                            " simplex");
    }
    sum += theta(i);
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DegenerateTheta("theta sums to " + std::to_string(sum) + ", expected 1");
  }
}

void require_gamma_feasible(const std::vector<StationarySolution>& stat, double gamma) {
  const double floor = feasibility_floor(stat);
  if (!(gamma > floor)) {
    throw InfeasibleGamma("gamma = " + std::to_string(gamma) +
                          " does not exceed the feasibility floor " +
                          std::to_string(floor));
  }
}

/// Maximizes a scalar function on [a, b] by golden-section search.
/// Assumes unimodality on the interval (the theta duals here are concave).
double golden_max(const std::function<double(double)>& f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int iter = 0; iter < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b));
       ++iter) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

/// Enumerates the grid {k/K} composition points of the (M-1)-simplex.
void enumerate_simplex(int M, int K, Vector& theta, int coord, int remaining,
                       const std::function<void(const Vector&)>& visit) {
  if (coord == M - 1) {
    theta(coord) = static_cast<double>(remaining) / K;
    visit(theta);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    theta(coord) = static_cast<double>(k) / K;
    enumerate_simplex(M, K, theta, coord + 1, remaining - k, visit);
  }
}

int grid_divisions(double theta_step) {
  if (!(theta_step > 0.0) || theta_step > 1.0) {
    throw ValidationError("theta step must lie in (0, 1]");
  }
  return std::max(1, static_cast<int>(std::llround(1.0 / theta_step)));
}

}  // namespace

BackwardSystem StackedSystem::game() const {
  return BackwardSystem{Fstack, Kstack, Qbar, Nbar, Rbar};
}

StackedSystem stacked_weights(const ValidatedModelSet& set,
                              const std::vector<StationarySolution>& stat,
                              const Vector& theta, double gamma) {
  const int M = set.size();
  const Eigen::Index n = set.n();
  const Eigen::Index m = set.m();
  check_theta(theta, M, /*open_simplex=*/false);
  require_gamma_feasible(stat, gamma);

  StackedSystem st;
  st.theta = theta;
  st.Fstack = Matrix::Zero(M * n, M * n);
  st.Kstack = Matrix::Zero(M * n, m);
  Matrix qbar = Matrix::Zero(M * n, M * n);
  Matrix nbar = Matrix::Zero(m, M * n);
  Matrix rbar = Matrix::Zero(m, m);

  std::vector<Matrix> QN_blocks(M);  // theta_i Q_{N,i}
  Matrix S = Matrix::Zero(n, n);     // sum theta_i Q_{N,i}
  for (int i = 0; i < M; ++i) {
    const SystemModel& model = set.model(i);
    const StationarySolution& s = stat[i];
    const Matrix Rt_inv = spd_inverse(s.Rtilde, "Rtilde").mat();

    st.Fstack.block(i * n, i * n, n, n) = model.F - s.K * model.H;
    st.Kstack.middleRows(i * n, n) = s.K;
    qbar.block(i * n, i * n, n, n) =
        theta(i) * model.H.transpose() * Rt_inv * model.H;
    nbar.middleCols(i * n, n) = theta(i) * Rt_inv * model.H;
    rbar += theta(i) * Rt_inv;

    const SymMatrix Qn_i = spd_inverse(
        SymMatrix(Matrix::Identity(n, n) - s.P.mat() / (gamma * gamma)),
        "I - gamma^{-2} P");
    QN_blocks[i] = theta(i) * Qn_i.mat();
    S += QN_blocks[i];
  }

  st.Qbar = SymMatrix(qbar);
  st.Nbar = nbar;
  st.Rbar = SymMatrix(rbar);

  // QN = bdiag(theta_i Q_{N,i}) - C S^{-1} C^T  with C the column stack of
  // the theta_i Q_{N,i} blocks.
  Matrix C(M * n, n);
  Matrix qn = Matrix::Zero(M * n, M * n);
  for (int i = 0; i < M; ++i) {
    C.middleRows(i * n, n) = QN_blocks[i];
    qn.block(i * n, i * n, n, n) = QN_blocks[i];
  }
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("stacked_weights: sum theta_i Q_{N,i} is not PD");
  }
  qn -= C * llt.solve(C.transpose());
  st.QN = SymMatrix(qn);
  return st;
}

LqrValue lqr_value(const ValidatedModelSet& set,
                   const std::vector<StationarySolution>& stat, const Vector& theta,
                   double gamma, int N, const std::vector<Vector>& x0_hats, double tol) {
  const StackedSystem st = stacked_weights(set, stat, theta, gamma);
  const SymMatrix T_N(-st.QN.mat() / (gamma * gamma));
  const BackwardRun run = run_backward_system(st.game(), T_N, N, tol);

  LqrValue out;
  out.fails_at = run.fails_at;
  if (!run.all_definite) {
    out.finite = false;
    out.J = std::numeric_limits<double>::infinity();
    return out;
  }

  if (static_cast<int>(x0_hats.size()) != set.size()) {
    throw DimensionMismatch("lqr_value: expected " + std::to_string(set.size()) +
                            " initial estimates, got " + std::to_string(x0_hats.size()));
  }
  Vector x0(set.size() * set.n());
  for (int i = 0; i < set.size(); ++i) {
    if (x0_hats[i].size() != set.n()) {
      throw DimensionMismatch("lqr_value: x0_hat " + std::to_string(i + 1) +
                              " has wrong length");
    }
    x0.segment(i * set.n(), set.n()) = x0_hats[i];
  }
  out.finite = true;
  out.J = -gamma * gamma * x0.dot(run.T0.mat() * x0);
  return out;
}

ExactValueResult exact_gamma(const ValidatedModelSet& set,
                             const std::vector<StationarySolution>& stat, int N,
                             double gamma_tol, double theta_step, double cap,
                             double tol) {
  if (set.size() != 2) {
    throw UnsupportedM("exact_gamma supports exactly two models, got " +
                       std::to_string(set.size()));
  }
  if (gamma_tol <= 0.0) {
    throw ValidationError("exact_gamma: gamma_tol must be positive");
  }
  const int K = grid_divisions(theta_step);
  const auto x0 = set.x0_hats();

  auto theta_at = [&](int k) {
    Vector theta(2);
    theta << static_cast<double>(k) / K, static_cast<double>(K - k) / K;
    return theta;
  };
  auto finite_on_grid = [&](double gamma) {
    for (int k = 0; k <= K; ++k) {
      if (!lqr_value(set, stat, theta_at(k), gamma, N, x0, tol).finite) return false;
    }
    return true;
  };

  const double floor = feasibility_floor(stat);
  const auto bracket = detail::gamma_bracket(floor, gamma_tol, cap, finite_on_grid);
  if (!bracket) {
    std::ostringstream msg;
    msg << "exact_gamma: grid value is unbounded for every gamma below the cap " << cap
        << " at N = " << N;
    throw NoUpperBound(msg.str());
  }

  ExactValueResult out;
  out.gamma = bracket->hi;
  out.theta_grid_step = 1.0 / K;
  out.finite = true;
  out.J = -std::numeric_limits<double>::infinity();
  out.argmax_theta = theta_at(0);
  for (int k = 0; k <= K; ++k) {
    const Vector theta = theta_at(k);
    const LqrValue v = lqr_value(set, stat, theta, out.gamma, N, x0, tol);
    if (!v.finite) {
      out.finite = false;
      continue;
    }
    if (v.J > out.J) {
      out.J = v.J;
      out.argmax_theta = theta;
    }
  }
  return out;
}

InterpolationMin interpolate_min(const std::vector<Vector>& zs,
                                 const std::vector<SymMatrix>& Zs) {
  if (zs.empty() || zs.size() != Zs.size()) {
    throw DimensionMismatch("interpolate_min: needs equally many centers and weights");
  }
  const Eigen::Index n = zs.front().size();
  Matrix Zsum = Matrix::Zero(n, n);
  Vector b = Vector::Zero(n);
  double constant = 0.0;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    if (zs[k].size() != n || Zs[k].rows() != n) {
      throw DimensionMismatch("interpolate_min: inconsistent dimensions at term " +
                              std::to_string(k + 1));
    }
    Zsum += Zs[k].mat();
    b += Zs[k].mat() * zs[k];
    constant += zs[k].dot(Zs[k].mat() * zs[k]);
  }
  const SymMatrix Zsym(Zsum);
  if (!is_positive_definite(Zsym)) {
    throw SingularSum("interpolate_min: sum of weights is not positive definite");
  }
  Eigen::LLT<Matrix> llt(Zsym.mat());
  InterpolationMin out;
  out.minimizer = llt.solve(b);
  out.value = constant - b.dot(out.minimizer);
  return out;
}

double quad_prog_value(const std::vector<Vector>& xs, const std::vector<SymMatrix>& Xs,
                       const Vector& theta) {
  const int M = static_cast<int>(xs.size());
  if (M == 0 || Xs.size() != xs.size()) {
    throw DimensionMismatch("quad_prog_value: needs equally many centers and weights");
  }
  check_theta(theta, M, /*open_simplex=*/true);

  const Eigen::Index n = xs.front().size();
  std::vector<Vector> z(M);
  Matrix S = Matrix::Zero(n, n);
  for (int i = 0; i < M; ++i) {
    if (xs[i].size() != n || Xs[i].rows() != n) {
      throw DimensionMismatch("quad_prog_value: inconsistent dimensions at term " +
                              std::to_string(i + 1));
    }
    if (!is_positive_definite(Xs[i])) {
      throw NotPositiveDefinite("quad_prog_value: X_" + std::to_string(i + 1) +
                                " is not positive definite");
    }
    Eigen::LLT<Matrix> llt(Xs[i].mat());
    z[i] = llt.solve(xs[i]);
    S += theta(i) * llt.solve(Matrix::Identity(n, n));
  }
  const Matrix S_inv = spd_inverse(SymMatrix(S), "sum theta_i X_i^{-1}").mat();

  double value = 0.0;
  for (int i = 0; i < M; ++i) {
    value += theta(i) * z[i].dot((Xs[i].mat() - S_inv) * z[i]);
    for (int j = 0; j < M; ++j) {
      const Vector d = z[i] - z[j];
      value += 0.5 * theta(i) * theta(j) * d.dot(S_inv * d);
    }
  }
  return value;
}

MinimaxInterpolation minimax_interpolation(const std::vector<Vector>& x_breves,
                                           const std::vector<SymMatrix>& Q_weights,
                                           const std::vector<double>& penalties,
                                           double theta_step) {
  const int M = static_cast<int>(x_breves.size());
  if (M == 0 || Q_weights.size() != x_breves.size() ||
      penalties.size() != x_breves.size()) {
    throw DimensionMismatch("minimax_interpolation: inconsistent input lengths");
  }
  const Eigen::Index n = x_breves.front().size();
  for (int i = 0; i < M; ++i) {
    if (x_breves[i].size() != n || Q_weights[i].rows() != n) {
      throw DimensionMismatch("minimax_interpolation: inconsistent dimensions at model " +
                              std::to_string(i + 1));
    }
    if (!is_positive_definite(Q_weights[i])) {
      throw NotPositiveDefinite("minimax_interpolation: weight " + std::to_string(i + 1) +
                                " is not positive definite");
    }
  }

  if (M == 1) {
    MinimaxInterpolation out;
    out.x_hat = x_breves[0];
    out.value = -penalties[0];
    out.theta_star = Vector::Ones(1);
    return out;
  }

  // Concave dual: g(theta) = sum theta_i (|xb_i|^2_{Q_i} - p_i) - |w|^2_{S^-1}
  // with S = sum theta_i Q_i and w = sum theta_i Q_i xb_i.
  auto dual = [&](const Vector& theta) -> std::pair<double, Vector> {
    Matrix S = Matrix::Zero(n, n);
    Vector w = Vector::Zero(n);
    double linear = 0.0;
    for (int i = 0; i < M; ++i) {
      S += theta(i) * Q_weights[i].mat();
      const Vector qx = Q_weights[i].mat() * x_breves[i];
      w += theta(i) * qx;
      linear += theta(i) * (x_breves[i].dot(qx) - penalties[i]);
    }
    Eigen::LLT<Matrix> llt(S);
    const Vector x_hat = llt.solve(w);
    return {linear - w.dot(x_hat), x_hat};
  };
  auto dual_value = [&](const Vector& theta) { return dual(theta).first; };

  const int K = grid_divisions(theta_step);
  Vector best_theta;
  double best_value = -std::numeric_limits<double>::infinity();
  Vector theta(M);
  enumerate_simplex(M, K, theta, 0, K, [&](const Vector& point) {
    const double value = dual_value(point);
    if (value > best_value) {
      best_value = value;
      best_theta = point;
    }
  });

  if (M == 2) {
    const double s0 = best_theta(0);
    const double lo = std::max(0.0, s0 - 1.0 / K);
    const double hi = std::min(1.0, s0 + 1.0 / K);
    const double s = golden_max(
        [&](double v) {
          Vector th(2);
          th << v, 1.0 - v;
          return dual_value(th);
        },
        lo, hi);
    Vector th(2);
    th << s, 1.0 - s;
    if (dual_value(th) > best_value) best_theta = th;
  } else {
    // Coordinate-pair ascent: redistribute mass within one pair at a time.
    Vector current = best_theta;
    double current_value = best_value;
    for (int sweep = 0; sweep < 60; ++sweep) {
      double improvement = 0.0;
      for (int a = 0; a < M; ++a) {
        for (int b = a + 1; b < M; ++b) {
          const double mass = current(a) + current(b);
          if (mass <= 0.0) continue;
          const double s = golden_max(
              [&](double v) {
                Vector th = current;
                th(a) = v;
                th(b) = mass - v;
                return dual_value(th);
              },
              0.0, mass);
          Vector th = current;
          th(a) = s;
          th(b) = mass - s;
          const double value = dual_value(th);
          if (value > current_value) {
            improvement += value - current_value;
            current_value = value;
            current = th;
          }
        }
      }
      if (improvement < 1e-14 * (1.0 + std::abs(current_value))) break;
    }
    best_theta = current;
  }

  auto [value, x_hat] = dual(best_theta);
  MinimaxInterpolation out;
  out.x_hat = x_hat;
  out.value = value;
  out.theta_star = best_theta;
  return out;
}

}  // namespace mmest
