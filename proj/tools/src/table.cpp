#include "specshift_cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace specshift::cli {

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return quote_csv(*s);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width differs from the header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + quote_csv(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

std::string to_json_text(const Table& t) {
  // Numbers are emitted with the same 17 digits as the CSV rather than nlohmann's
  // shortest form, so both formats carry identical values.
  std::string out = "[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += r ? ",\n  {" : "\n  {";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      out += (i ? ", " : "") + nlohmann::json(t.columns[i]).dump() + ": ";
      const Cell& c = t.rows[r][i];
      if (const auto* s = std::get_if<std::string>(&c)) {
        out += nlohmann::json(*s).dump();
      } else if (const auto* d = std::get_if<double>(&c)) {
        out += std::isfinite(*d) ? format_double(*d) : nlohmann::json(format_double(*d)).dump();
      } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
        out += std::to_string(*i);
      } else {
        out += std::get<bool>(c) ? "true" : "false";
      }
    }
    out += "}";
  }
  out += t.rows.empty() ? "]\n" : "\n]\n";
  return out;
}

}  // namespace specshift::cli
