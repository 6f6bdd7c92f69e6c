#include "hypoharnack/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hypoharnack {

double EstimateReport::get_extra(const std::string& key, double fallback) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  return fallback;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // shortest representation that round-trips
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
using nlohmann::ordered_json;

ordered_json to_ordered(const EstimateReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["ratio"] = r.ratio;
  j["grid_level"] = r.grid_level;
  j["trials"] = r.trials;
  for (const auto& [k, v] : r.extras) j[k] = v;
  j["passed"] = r.passed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}
} // namespace

std::string report_to_json(const EstimateReport& r) { return to_ordered(r).dump(2); }

std::string reports_to_json(const std::vector<EstimateReport>& rs) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rs) arr.push_back(to_ordered(r));
  return arr.dump(2);
}

namespace {
std::string csv_escape(const std::string& s) {
  bool needs = false;
  for (char c : s)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') needs = true;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}
} // namespace

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: row width mismatch");
  rows_.push_back(cells);
}

void CsvWriter::add_row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

std::string CsvWriter::str() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(columns_[i]);
  }
  out += "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
  f << str();
}

} // namespace hypoharnack
