#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hypoharnack {

/// Measured left/right sides of a paper inequality with its grid-refinement
/// history. Constants are never assumed: ratio = lhs / rhs with all free
/// constants set to 1, and acceptance predicates act on ratios across levels.
struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  int grid_level = 0;
  std::vector<double> trials; // per-trial headline values
  std::vector<std::pair<std::string, double>> extras;
  bool passed = true;
  std::string note;

  void extra(const std::string& key, double value) { extras.emplace_back(key, value); }
  double get_extra(const std::string& key, double fallback = 0.0) const;
};

/// Stable-key-order JSON (insertion order preserved).
std::string report_to_json(const EstimateReport& r);
std::string reports_to_json(const std::vector<EstimateReport>& rs);

/// Shortest exact decimal for a double; deterministic across runs.
std::string format_double(double v);

/// RFC 4180 CSV writer, UTF-8, '.' decimal separator.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add_row(const std::vector<std::string>& cells);
  void add_row_values(const std::vector<double>& values);
  std::string str() const;
  void write(const std::string& path) const;

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

} // namespace hypoharnack
