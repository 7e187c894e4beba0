#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qtrack/trace.hpp"

namespace qtrack {

struct Series {
  std::string label;
  std::vector<double> k;
  std::vector<double> value;
};

/// Line chart with a log10 y-axis. Non-positive values are skipped.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& y_label = "optimality gap");

/// Least-squares slope of log10(gap) against k over rows with
/// k >= k_last / 2. Non-positive gaps are left out. NaN when fewer than two
/// points remain.
double final_half_log_slope(const std::vector<TraceRow>& rows);

struct CompareRow {
  std::string label;
  double final_gap = 0.0;
  double slope = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::string svg;
};

/// Needs at least two traces sharing the same k grid.
CompareReport compare_report(const std::vector<std::string>& paths);

void print_compare_table(std::ostream& out, const CompareReport& report);

}  // namespace qtrack
