#include "qtrack/trace.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace qtrack {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_finite(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(field.substr(used)).size() != 0 || !std::isfinite(v))
    throw Error("trace line " + std::to_string(line) + ": '" + field + "' is not a finite number");
  return v;
}

std::int64_t parse_integer(const std::string& field, std::size_t line) {
  const double v = parse_finite(field, line);
  if (v != std::floor(v)) throw Error("trace line " + std::to_string(line) + ": expected an integer");
  return static_cast<std::int64_t>(v);
}

}  // namespace

void write_trace_csv(std::ostream& out, const ExperimentTrace& trace) {
  const auto old_precision = out.precision(17);
  const auto& s = trace.summary;
  if (trace.oracle) {
    out << "# Fstar=" << trace.oracle->f_star << '\n';
    out << "# grad_norm=" << trace.oracle->grad_norm << '\n';
    out << "# oracle_iterations=" << trace.oracle->iterations << '\n';
    out << "# oracle_converged=" << (trace.oracle->converged ? 1 : 0) << '\n';
  }
  out << "# alpha=" << s.alpha << '\n';
  out << "# alpha_bar=" << s.alpha_bar << '\n';
  out << "# lambda2=" << s.lambda2 << '\n';
  out << "# L=" << s.smoothness << '\n';
  if (s.k_upper) out << "# K_upper=" << *s.k_upper << '\n';
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << r.gap << ',' << r.consensus_err << ',' << r.tracking_residual << ',' << r.alpha
        << ',' << r.epoch << '\n';
  }
  out.precision(old_precision);
}

void write_summary(std::ostream& out, const ExperimentTrace& trace, const std::string& name) {
  const auto old_precision = out.precision(10);
  const auto& s = trace.summary;
  out << "name: " << name << '\n';
  out << "iterations: " << s.iterations << '\n';
  out << "final_gap: " << s.final_gap << '\n';
  out << "alpha: " << s.alpha << '\n';
  out << "alpha_bar: " << s.alpha_bar << '\n';
  out << "lambda2: " << s.lambda2 << '\n';
  out << "L: " << s.smoothness << '\n';
  out << "K_upper: ";
  if (s.k_upper)
    out << *s.k_upper << '\n';
  else
    out << "none (uncertified)\n";
  out << "stopped_on_tolerance: " << (s.stopped_on_tolerance ? "yes" : "no") << '\n';
  out << "diverged: " << (s.diverged ? "yes" : "no") << '\n';
  out << "clamp_count: " << s.clamp_count << '\n';
  out << "floored_gaps: " << s.floored_gaps << '\n';
  out << "max_conservation_residual: " << s.max_conservation_residual << '\n';
  out << "max_tracking_residual: " << s.max_tracking_residual << '\n';
  if (trace.oracle) {
    out << "oracle_Fstar: " << trace.oracle->f_star << '\n';
    out << "oracle_grad_norm: " << trace.oracle->grad_norm << '\n';
    out << "oracle_converged: " << (trace.oracle->converged ? "yes" : "no") << '\n';
  }
  out.precision(old_precision);
}

const std::string* TraceFile::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

TraceFile read_trace_csv(std::istream& in) {
  TraceFile file;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) file.meta.emplace_back(trim(t.substr(1, eq - 1)), trim(t.substr(eq + 1)));
      continue;
    }
    if (!header_seen) {
      if (t != kTraceHeader)
        throw Error("trace line " + std::to_string(line_no) + ": expected header '" + kTraceHeader + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 6)
      throw Error("trace line " + std::to_string(line_no) + ": expected 6 fields, got " +
                  std::to_string(fields.size()));
    TraceRow r;
    r.k = parse_integer(fields[0], line_no);
    r.gap = parse_finite(fields[1], line_no);
    r.consensus_err = parse_finite(fields[2], line_no);
    r.tracking_residual = parse_finite(fields[3], line_no);
    r.alpha = parse_finite(fields[4], line_no);
    r.epoch = parse_integer(fields[5], line_no);
    file.rows.push_back(r);
  }
  if (!header_seen) throw Error("trace: missing header line");
  return file;
}

TraceFile read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file '" + path + "'");
  try {
    return read_trace_csv(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace qtrack
