#include "mmest/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

namespace mmest::csv {

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  return out;
}

double parse_double(const std::string& cell) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &pos);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + cell + "'");
  }
  while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
  if (pos != cell.size()) {
    throw ParseError("trailing characters in numeric cell: '" + cell + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  if (cells.empty()) cells.push_back("");
  return cells;
}

std::vector<std::vector<double>> read_numeric(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t arity = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    std::vector<double> row;
    row.reserve(cells.size());
    try {
      for (const auto& cell : cells) row.push_back(parse_double(cell));
    } catch (const ParseError&) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw ParseError(path + ": non-numeric cell in data row " +
                       std::to_string(rows.size() + 1));
    }
    first = false;
    if (arity == 0) {
      arity = row.size();
    } else if (row.size() != arity) {
      throw ParseError(path + ": row " + std::to_string(rows.size() + 1) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(arity));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mmest::csv
