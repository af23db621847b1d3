// Shared test fixtures: validated benchmark sets with their stationary
// solutions, random scalar two-model sets, and glue that feeds the library's
// stationary quantities into the dense oracle (so oracle comparisons isolate
// the backward machinery; the forward solve has its own quadratic oracle).
#pragma once

#include <random>

#include "mmest/backward.hpp"
#include "mmest/experiments.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace mmest;

struct Fixture {
  ValidatedModelSet set;
  std::vector<StationarySolution> stat;
};

inline Fixture fixture(char which) {
  ValidatedModelSet set = validate_model_set(builtin_table1(which));
  auto stat = solve_all_stationary(set);
  return {std::move(set), std::move(stat)};
}

inline Fixture fixture(const ModelSet& raw) {
  ValidatedModelSet set = validate_model_set(raw);
  auto stat = solve_all_stationary(set);
  return {std::move(set), std::move(stat)};
}

/// Random scalar two-model set; H is bounded away from zero so the stationary
/// solve always converges.
inline ModelSet random_scalar_pair(std::mt19937& rng, double f_range = 1.6,
                                   double x0_range = 1.5) {
  std::uniform_real_distribution<double> uf(-f_range, f_range);
  std::uniform_real_distribution<double> uh(0.3, 2.0);
  std::uniform_real_distribution<double> usign(0.0, 1.0);
  std::uniform_real_distribution<double> uq(0.5, 2.0);
  std::uniform_real_distribution<double> ux(-x0_range, x0_range);
  ModelSet raw;
  for (int i = 0; i < 2; ++i) {
    SystemModel m;
    m.F = Matrix::Constant(1, 1, uf(rng));
    m.H = Matrix::Constant(1, 1, (usign(rng) < 0.5 ? -1.0 : 1.0) * uh(rng));
    m.Q = SymMatrix(Matrix::Constant(1, 1, uq(rng)));
    m.R = SymMatrix(Matrix::Constant(1, 1, uq(rng)));
    m.x0_hat = Vector::Constant(1, ux(rng));
    raw.models.push_back(m);
  }
  return raw;
}

/// Dense-oracle input for a tuple of model indices with given stage weights;
/// terminal W and x0 are the caller's. Uses the library's stationary
/// quantities so oracle comparisons isolate the backward machinery.
inline oracle::DenseGameInput dense_input_models(const Fixture& f,
                                                 const std::vector<int>& indices,
                                                 const std::vector<double>& weights,
                                                 double gamma) {
  oracle::DenseGameInput in;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const auto& model = f.set.model(indices[t]);
    const auto& s = f.stat[indices[t]];
    in.A.push_back(model.F - s.K * model.H);
    in.K.push_back(s.K);
    in.H.push_back(model.H);
    in.Rt_inv.push_back(s.Rtilde.mat().inverse());
    in.w.push_back(weights[t]);
  }
  in.gamma2 = gamma * gamma;
  return in;
}

/// Pair (i, j) input with the terminal built from independent scalar
/// transcriptions. Scalar sets only.
inline oracle::DenseGameInput dense_pair_input(const Fixture& f, int i, int j,
                                               double gamma, TerminalKind kind,
                                               const Vector& x0) {
  oracle::DenseGameInput in = dense_input_models(f, {i, j}, {1.0, 1.0}, gamma);
  double pmax = 0.0;
  for (const auto& s : f.stat) pmax = std::max(pmax, s.P(0, 0));
  in.W = kind == TerminalKind::kSufficient
             ? oracle::scalar_terminal_sufficient(pmax, gamma)
             : oracle::scalar_terminal_necessary(f.stat[i].P(0, 0), f.stat[j].P(0, 0),
                                                 gamma);
  in.x0 = x0;
  return in;
}

/// Stacked initial estimate [x0_hat_i; x0_hat_j] of a scalar pair.
inline Vector stacked_x0(const Fixture& f, int i, int j) {
  Vector x0(2);
  x0 << f.set.model(i).x0_hat(0), f.set.model(j).x0_hat(0);
  return x0;
}

}  // namespace fixtures
