#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace specshift::cli {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double x);

/// Header plus rows, "\n" line endings. Strings containing a comma, quote or newline
/// are quoted.
std::string to_csv(const Table& t);

/// Array of row objects keyed by column name, one object per line.
std::string to_json_text(const Table& t);

}  // namespace specshift::cli
