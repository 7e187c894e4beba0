#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qtrack/engine.hpp"

namespace qtrack {

/// Column order of every trace CSV. Fixed; readers rely on it.
inline constexpr const char* kTraceHeader = "k,gap,consensus_err,tracking_residual,alpha,epoch";

/// Comment lines (`# key=value`) carrying the oracle result and run summary,
/// then the header and one row per record. Values use 17 significant digits.
void write_trace_csv(std::ostream& out, const ExperimentTrace& trace);

/// Plain-text summary block (one `key: value` per line).
void write_summary(std::ostream& out, const ExperimentTrace& trace, const std::string& name);

struct TraceRow {
  std::int64_t k = 0;
  double gap = 0.0;
  double consensus_err = 0.0;
  double tracking_residual = 0.0;
  double alpha = 0.0;
  std::int64_t epoch = 0;
};

struct TraceFile {
  std::vector<std::pair<std::string, std::string>> meta;  // from `# key=value` lines
  std::vector<TraceRow> rows;

  const std::string* find_meta(const std::string& key) const;
};

/// Parses a trace CSV. Throws Error on a wrong header, a short row or a
/// value that is not a finite number.
TraceFile read_trace_csv(std::istream& in);
TraceFile read_trace_csv_file(const std::string& path);

}  // namespace qtrack
