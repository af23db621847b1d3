#include "mmest/experiments.hpp"

#include <cmath>
#include <ostream>

#include "mmest/csv.hpp"
#include "mmest/exact.hpp"

namespace mmest {

namespace {

SystemModel scalar_model(double f, double h) {
  SystemModel model;
  model.F = Matrix::Constant(1, 1, f);
  model.H = Matrix::Constant(1, 1, h);
  model.Q = SymMatrix(Matrix::Identity(1, 1));
  model.R = SymMatrix(Matrix::Identity(1, 1));
  model.x0_hat = Vector::Zero(1);
  return model;
}

}  // namespace

ModelSet builtin_table1(char which) {
  ModelSet set;
  switch (which) {
    case 'a':
      set.models = {scalar_model(1.1, 1.0), scalar_model(1.1, -1.0)};
      break;
    case 'b':
      set.models = {scalar_model(0.9, 1.0), scalar_model(0.9, -1.0)};
      break;
    case 'c':
      set.models = {scalar_model(0.7, 1.5), scalar_model(0.9, 1.0)};
      break;
    case 'd':
      set.models = {scalar_model(2.0, 1.0), scalar_model(1.0, 16.0)};
      break;
    default:
      throw ValidationError(std::string("unknown builtin system '") + which +
                            "', expected a..d");
  }
  return set;
}

ExperimentSpec builtin_spec(char which) {
  ExperimentSpec spec;
  spec.name = std::string("table1_") + which;
  spec.model_set = builtin_table1(which);
  return spec;
}

std::vector<CurveRow> run_curves(const ExperimentSpec& spec, double cap) {
  const ValidatedModelSet set = spec.validated();
  const auto stat = solve_all_stationary(set);

  std::vector<CurveRow> rows;
  for (int N = spec.horizon.from; N <= spec.horizon.to; ++N) {
    CurveRow row;
    row.N = N;
    try {
      row.gamma_floor = feasibility_floor(stat);
      row.gamma_lower = bisect_lower(set, stat, N, spec.gamma_tol, cap);
      row.gamma_upper = bisect_upper(set, stat, N, spec.gamma_tol, cap);
      if (set.size() == 2) {
        row.gamma_exact =
            exact_gamma(set, stat, N, spec.gamma_tol, spec.theta_step, cap).gamma;
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "N,gamma_floor,gamma_lower,gamma_exact,gamma_upper,error\n";
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    cells.push_back(std::to_string(row.N));
    cells.push_back(std::isnan(row.gamma_floor) ? "" : csv::format(row.gamma_floor));
    cells.push_back(std::isnan(row.gamma_lower) ? "" : csv::format(row.gamma_lower));
    cells.push_back(row.gamma_exact ? csv::format(*row.gamma_exact) : "");
    cells.push_back(std::isnan(row.gamma_upper) ? "" : csv::format(row.gamma_upper));
    cells.push_back(row.error);
    out << csv::join(cells) << "\n";
  }
}

std::vector<Table1Row> run_table1() {
  // Published stationary P values, Table-1 order.
  const struct {
    char system;
    double p1;
    double p2;
  } published[] = {
      {'a', 1.77, 1.77},
      {'b', 1.48, 1.48},
      {'c', 1.16, 1.48},
      {'d', 4.23, 1.00},
  };

  std::vector<Table1Row> rows;
  for (const auto& entry : published) {
    const ValidatedModelSet set = validate_model_set(builtin_table1(entry.system));
    const auto stat = solve_all_stationary(set);
    const double expected[2] = {entry.p1, entry.p2};
    for (int i = 0; i < 2; ++i) {
      Table1Row row;
      row.system = std::string(1, entry.system);
      row.model = i + 1;
      row.computed = stat[i].P(0, 0);
      row.published = expected[i];
      row.pass = std::abs(row.computed - row.published) <= 0.01;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace mmest
