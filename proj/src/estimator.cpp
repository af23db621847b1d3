#include "mmest/estimator.hpp"

namespace mmest {

struct FilterBank::Bankshared {
  double gamma = 0.0;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::vector<Matrix> F;
  std::vector<Matrix> H;
  std::vector<Matrix> K;
  std::vector<SymMatrix> Rtilde_inv;
  std::vector<SymMatrix> Qn;  // (I - gamma^{-2} P_i)^{-1}
};

FilterBank FilterBank::create(const ValidatedModelSet& set,
                              const std::vector<StationarySolution>& stat, double gamma,
                              const std::vector<Vector>& x0_hats) {
  if (static_cast<int>(stat.size()) != set.size()) {
    throw DimensionMismatch("new_bank: stationary solutions do not match the model set");
  }
  const double floor = feasibility_floor(stat);
  if (!(gamma > floor)) {
    throw InfeasibleGamma("new_bank: gamma = " + std::to_string(gamma) +
                          " does not exceed the feasibility floor " +
                          std::to_string(floor));
  }
  if (x0_hats.size() != stat.size()) {
    throw DimensionMismatch("new_bank: expected " + std::to_string(stat.size()) +
                            " initial estimates, got " + std::to_string(x0_hats.size()));
  }

  auto shared = std::make_shared<Bankshared>();
  shared->gamma = gamma;
  shared->n = set.n();
  shared->m = set.m();
  const Matrix eye = Matrix::Identity(set.n(), set.n());
  for (int i = 0; i < set.size(); ++i) {
    shared->F.push_back(set.model(i).F);
    shared->H.push_back(set.model(i).H);
    shared->K.push_back(stat[i].K);
    shared->Rtilde_inv.push_back(spd_inverse(stat[i].Rtilde, "Rtilde"));
    shared->Qn.push_back(
        spd_inverse(SymMatrix(eye - stat[i].P.mat() / (gamma * gamma)),
                    "I - gamma^{-2} P"));
  }

  FilterBank bank;
  bank.shared_ = std::move(shared);
  bank.t_ = 0;
  for (const auto& x0 : x0_hats) {
    if (x0.size() != set.n()) {
      throw DimensionMismatch("new_bank: initial estimate has wrong length");
    }
    bank.x_breve_.push_back(x0);
  }
  bank.c_.assign(stat.size(), 0.0);
  return bank;
}

double FilterBank::gamma() const { return shared_->gamma; }

int FilterBank::size() const { return static_cast<int>(x_breve_.size()); }

FilterBank FilterBank::step(const Vector& y) const {
  if (y.size() != shared_->m) {
    throw DimensionMismatch("step at t = " + std::to_string(t_) +
                            ": measurement has length " + std::to_string(y.size()) +
                            ", expected " + std::to_string(shared_->m));
  }
  FilterBank next = *this;
  next.t_ = t_ + 1;
  for (int i = 0; i < size(); ++i) {
    const Vector hx = shared_->H[i] * x_breve_[i];
    const Vector residual = hx - y;
    next.c_[i] = c_[i] + residual.dot(shared_->Rtilde_inv[i].mat() * residual);
    const Vector innovation = y - hx;
    next.x_breve_[i] = shared_->F[i] * x_breve_[i] + shared_->K[i] * innovation;
  }
  return next;
}

EstimateReport FilterBank::estimate(double theta_step) const {
  const double g2 = shared_->gamma * shared_->gamma;
  EstimateReport report;
  report.t = t_;

  if (size() == 1) {
    report.x_hat = x_breve_[0];
    report.game_value = -g2 * c_[0];
    report.theta_star = Vector::Ones(1);
    report.per_model_costs = {report.game_value};
    return report;
  }

  std::vector<double> penalties(size());
  for (int i = 0; i < size(); ++i) penalties[i] = g2 * c_[i];
  const MinimaxInterpolation sol =
      minimax_interpolation(x_breve_, shared_->Qn, penalties, theta_step);

  report.x_hat = sol.x_hat;
  report.game_value = sol.value;
  report.theta_star = sol.theta_star;
  report.per_model_costs.resize(size());
  for (int i = 0; i < size(); ++i) {
    const Vector d = sol.x_hat - x_breve_[i];
    report.per_model_costs[i] = d.dot(shared_->Qn[i].mat() * d) - penalties[i];
  }
  return report;
}

FilterBank new_bank(const ValidatedModelSet& set,
                    const std::vector<StationarySolution>& stat, double gamma,
                    const std::vector<Vector>& x0_hats) {
  return FilterBank::create(set, stat, gamma, x0_hats);
}

std::vector<EstimateReport> run_sequence(const ValidatedModelSet& set,
                                         const std::vector<StationarySolution>& stat,
                                         double gamma,
                                         const std::vector<Vector>& x0_hats,
                                         const std::vector<Vector>& ys,
                                         double theta_step) {
  FilterBank bank = new_bank(set, stat, gamma, x0_hats);
  std::vector<EstimateReport> reports;
  reports.reserve(ys.size() + 1);
  reports.push_back(bank.estimate(theta_step));
  for (const auto& y : ys) {
    bank = bank.step(y);
    reports.push_back(bank.estimate(theta_step));
  }
  return reports;
}

}  // namespace mmest
