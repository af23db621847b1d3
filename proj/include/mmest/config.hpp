#pragma once

#include <string>

#include "mmest/model.hpp"

namespace mmest {

/// Inclusive horizon range for curve runs.
struct HorizonRange {
  int from = 1;
  int to = 20;
};

/// A parsed experiment configuration. JSON schema:
///
///   {
///     "name": "table1_a",                      // optional
///     "models": [                              // required, length >= 1
///       {
///         "F": [[1.1]],                        // n x n, list of rows
///         "H": [[1.0]],                        // m x n
///         "Q": [[1.0]],                        // n x n
///         "R": [[1.0]],                        // m x m
///         "x0_hat": [0.0]                      // optional, defaults to 0
///       }, ...
///     ],
///     "horizon": {"from": 1, "to": 20},        // optional
///     "gamma_tol": 1e-3,                       // optional
///     "theta_step": 1e-3,                      // optional
///     "output": "curves.csv"                   // optional
///   }
struct ExperimentSpec {
  std::string name;
  ModelSet model_set;
  HorizonRange horizon;
  double gamma_tol = defaults::kBisectionTol;
  double theta_step = defaults::kThetaStep;
  std::string output;

  ValidatedModelSet validated() const { return validate_model_set(model_set); }
};

/// Loads and validates a configuration file. Parse problems raise ParseError
/// naming the offending field; model validation errors pass through.
ExperimentSpec load_config(const std::string& path);

/// Same, from in-memory JSON text (used by tests and defaults).
ExperimentSpec parse_config(const std::string& text, const std::string& origin);

}  // namespace mmest
