#pragma once

#include <string>
#include <vector>

#include "mmest/errors.hpp"

namespace mmest::csv {

/// 12 significant digits, locale-independent ("%.12g").
std::string format(double v);

std::string join(const std::vector<std::string>& cells);

/// Parses a strict double cell; ParseError otherwise. Empty cells are NaN.
double parse_double(const std::string& cell);

/// Splits one CSV line on commas (no quoting; the emitted files never quote).
std::vector<std::string> split(const std::string& line);

/// Reads a numeric table. A non-numeric first row is treated as a header and
/// skipped. Rows must have equal arity.
std::vector<std::vector<double>> read_numeric(const std::string& path);

}  // namespace mmest::csv
