#include "mmest/config.hpp"

#include <fstream>

#include "json.hpp"

namespace mmest {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(where + ": expected a non-empty list of rows");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ParseError(where + ": rows must be non-empty lists of numbers");
  }
  const std::size_t cols = j[0].size();
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError(where + ": row " + std::to_string(r + 1) +
                       " has inconsistent length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        throw ParseError(where + ": entry (" + std::to_string(r + 1) + ", " +
                         std::to_string(c + 1) + ") is not a number");
      }
      out(r, c) = j[r][c].get<double>();
    }
  }
  return out;
}

Vector parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) {
    throw ParseError(where + ": expected a list of numbers");
  }
  Vector out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError(where + ": entry " + std::to_string(i + 1) + " is not a number");
    }
    out(i) = j[i].get<double>();
  }
  return out;
}

SystemModel parse_model(const json& j, int index) {
  const std::string tag = "models[" + std::to_string(index + 1) + "]";
  SystemModel model;
  for (const char* field : {"F", "H", "Q", "R"}) {
    if (!j.contains(field)) {
      throw ParseError(tag + ": missing field '" + std::string(field) + "'");
    }
  }
  model.F = parse_matrix(j.at("F"), tag + ".F");
  model.H = parse_matrix(j.at("H"), tag + ".H");
  model.Q = SymMatrix(parse_matrix(j.at("Q"), tag + ".Q"));
  model.R = SymMatrix(parse_matrix(j.at("R"), tag + ".R"));
  if (j.contains("x0_hat")) {
    model.x0_hat = parse_vector(j.at("x0_hat"), tag + ".x0_hat");
  }
  return model;
}

double parse_positive(const json& j, const std::string& where, double fallback) {
  if (!j.contains(where)) return fallback;
  if (!j.at(where).is_number()) {
    throw ParseError(where + ": expected a number");
  }
  const double v = j.at(where).get<double>();
  if (!(v > 0.0)) {
    throw ParseError(where + ": must be positive, got " + std::to_string(v));
  }
  return v;
}

}  // namespace

ExperimentSpec parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!j.is_object()) {
    throw ParseError(origin + ": top level must be an object");
  }

  ExperimentSpec spec;
  spec.name = j.value("name", std::string{});
  if (!j.contains("models")) {
    throw ParseError(origin + ": missing field 'models'");
  }
  if (!j.at("models").is_array()) {
    throw ParseError(origin + ": 'models' must be a list");
  }
  int index = 0;
  for (const auto& jm : j.at("models")) {
    spec.model_set.models.push_back(parse_model(jm, index++));
  }

  if (j.contains("horizon")) {
    const auto& h = j.at("horizon");
    if (!h.is_object() || !h.contains("from") || !h.contains("to") ||
        !h.at("from").is_number_integer() || !h.at("to").is_number_integer()) {
      throw ParseError(origin + ": 'horizon' must be {\"from\": int, \"to\": int}");
    }
    spec.horizon.from = h.at("from").get<int>();
    spec.horizon.to = h.at("to").get<int>();
    if (spec.horizon.from < 0 || spec.horizon.to < spec.horizon.from) {
      throw ParseError(origin + ": 'horizon' range is empty or negative");
    }
  }
  spec.gamma_tol = parse_positive(j, "gamma_tol", defaults::kBisectionTol);
  spec.theta_step = parse_positive(j, "theta_step", defaults::kThetaStep);
  spec.output = j.value("output", std::string{});

  validate_model_set(spec.model_set);  // surfaces dimension/definiteness problems now
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ExperimentSpec spec = parse_config(text, path);
  if (spec.name.empty()) spec.name = path;
  return spec;
}

}  // namespace mmest
