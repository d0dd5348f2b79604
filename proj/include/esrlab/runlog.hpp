#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace esr {

/// One evaluated expression.
struct LogRecord {
  int gen = 0;
  long eval_id = 0;
  std::uint64_t struct_hash = 0;
  std::uint64_t sem_hash = 0;
  /// False for over-length expressions, which are never simplified.
  bool has_sem = true;
  /// Minimized objective; +inf for over-length or degenerate fits.
  double fitness = 0.0;
  std::string expr;
  /// Cumulative objective evaluations including this record's fit.
  long fevals = 0;
  std::vector<double> theta;
};

/// Trace of one search run. Header lines are "#key=value".
struct RunLog {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<LogRecord> records;

  /// Header value or "" when absent.
  std::string get(const std::string& key) const;
  void set(const std::string& key, std::string value);
};

/// Records: gen, eval_id, struct_hash, sem_hash ("-" if none), fitness, expr,
/// fevals, theta (comma separated), tab separated.
void save_runlog(const RunLog& log, const std::filesystem::path& path);
RunLog load_runlog(const std::filesystem::path& path);

std::string format_record(const LogRecord& r);
LogRecord parse_log_record(std::string_view line);

}  // namespace esr
