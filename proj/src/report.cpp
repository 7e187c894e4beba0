#include "qtrack/report.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>

namespace qtrack {

double final_half_log_slope(const std::vector<TraceRow>& rows) {
  if (rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double half = static_cast<double>(rows.back().k) / 2.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& r : rows) {
    if (static_cast<double>(r.k) < half || !(r.gap > 0.0)) continue;
    const double x = static_cast<double>(r.k), y = std::log10(r.gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double den = count * sxx - sx * sx;
  if (count < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / den;
}

CompareReport compare_report(const std::vector<std::string>& paths) {
  if (paths.size() < 2)
    throw Error("compare needs at least two trace files, got " + std::to_string(paths.size()));
  std::vector<TraceFile> files;
  for (const auto& p : paths) files.push_back(read_trace_csv_file(p));

  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i].rows.empty()) throw Error(paths[i] + ": trace has no rows");
    bool same = files[i].rows.size() == files[0].rows.size();
    for (std::size_t r = 0; same && r < files[i].rows.size(); ++r) same = files[i].rows[r].k == files[0].rows[r].k;
    if (!same) throw Error("trace grids differ: " + paths[i] + " does not share the k values of " + paths[0]);
  }

  CompareReport report;
  std::vector<Series> series;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto label = std::filesystem::path(paths[i]).stem().string();
    report.rows.push_back({label, files[i].rows.back().gap, final_half_log_slope(files[i].rows)});
    Series s{label, {}, {}};
    for (const auto& r : files[i].rows) {
      s.k.push_back(static_cast<double>(r.k));
      s.value.push_back(r.gap);
    }
    series.push_back(std::move(s));
  }
  report.svg = render_svg(series, "optimality gap");
  return report;
}

void print_compare_table(std::ostream& out, const CompareReport& report) {
  std::size_t width = 5;
  for (const auto& r : report.rows) width = std::max(width, r.label.size());
  const auto flags = out.flags();
  out << std::left << std::setw(static_cast<int>(width)) << "trace" << "  " << std::setw(14) << "final_gap"
      << "  " << "log10_slope" << '\n';
  for (const auto& r : report.rows) {
    out << std::setw(static_cast<int>(width)) << r.label << "  " << std::setw(14) << std::scientific
        << std::setprecision(6) << r.final_gap << "  " << r.slope << '\n';
  }
  out.flags(flags);
}

}  // namespace qtrack
