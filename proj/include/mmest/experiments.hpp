#pragma once

#include <iosfwd>
#include <limits>
#include <optional>

#include "mmest/config.hpp"

namespace mmest {

/// One horizon of the bound/exact curves. gamma_exact is absent for M != 2 or
/// when the exact computation failed; `error` records per-horizon failures
/// (e.g. NoUpperBound) without aborting the remaining rows.
struct CurveRow {
  int N = 0;
  double gamma_floor = std::numeric_limits<double>::quiet_NaN();
  double gamma_lower = std::numeric_limits<double>::quiet_NaN();
  double gamma_upper = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> gamma_exact;
  std::string error;
};

/// Computes floor / lower / upper (and, for two-model sets, exact) levels for
/// every N in the spec's horizon range.
std::vector<CurveRow> run_curves(const ExperimentSpec& spec,
                                 double cap = defaults::kGammaCap);

/// Header: N,gamma_floor,gamma_lower,gamma_exact,gamma_upper,error
void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows);

/// Stationary-P regression against the published scalar benchmark values.
struct Table1Row {
  std::string system;  // "a".."d"
  int model = 0;       // 1 or 2
  double computed = 0.0;
  double published = 0.0;
  bool pass = false;   // |computed - published| <= 0.01
};

std::vector<Table1Row> run_table1();

/// The four bundled two-model benchmark sets (Q = R = 1, zero x0_hat):
///   a: F = (1.1, 1.1),  H = (1, -1)   unstable, indistinguishable
///   b: F = (0.9, 0.9),  H = (1, -1)   stable, indistinguishable
///   c: F = (0.7, 0.9),  H = (1.5, 1)  stable, distinguishable
///   d: F = (2, 1),      H = (1, 16)   unstable, distinguishable
ModelSet builtin_table1(char which);

/// Experiment spec wrapping builtin_table1 with the default tolerances.
ExperimentSpec builtin_spec(char which);

}  // namespace mmest
