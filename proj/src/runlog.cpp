#include "esrlab/runlog.hpp"

#include <fstream>

#include "esrlab/catalog.hpp"
#include "esrlab/error.hpp"
#include "esrlab/text.hpp"

namespace esr {

std::string RunLog::get(const std::string& key) const {
  for (const auto& [k, v] : header) {
    if (k == key) return v;
  }
  return {};
}

void RunLog::set(const std::string& key, std::string value) {
  for (auto& [k, v] : header) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  header.emplace_back(key, std::move(value));
}

std::string format_record(const LogRecord& r) {
  std::string s = std::to_string(r.gen);
  s += '\t';
  s += std::to_string(r.eval_id);
  s += '\t';
  s += format_hash(r.struct_hash);
  s += '\t';
  s += r.has_sem ? format_hash(r.sem_hash) : "-";
  s += '\t';
  s += format_double(r.fitness);
  s += '\t';
  s += r.expr;
  s += '\t';
  s += std::to_string(r.fevals);
  s += '\t';
  s += join_doubles(r.theta);
  return s;
}

LogRecord parse_log_record(std::string_view line) {
  const auto f = split(line, '\t');
  if (f.size() != 8) throw DataError("log record needs 8 fields, got " + std::to_string(f.size()));
  LogRecord r;
  r.gen = static_cast<int>(parse_double(f[0]));
  r.eval_id = static_cast<long>(parse_double(f[1]));
  r.struct_hash = parse_hash(f[2]);
  r.has_sem = f[3] != "-";
  if (r.has_sem) r.sem_hash = parse_hash(f[3]);
  r.fitness = parse_double(f[4]);
  r.expr = std::string(f[5]);
  r.fevals = static_cast<long>(parse_double(f[6]));
  r.theta = split_doubles(f[7]);
  return r;
}

void save_runlog(const RunLog& log, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    for (const auto& [k, v] : log.header) out << '#' << k << '=' << v << '\n';
    for (const LogRecord& r : log.records) out << format_record(r) << '\n';
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

RunLog load_runlog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open log " + path.string());
  RunLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw DataError(path.string() + ":" + std::to_string(lineno) + ": header without '='");
      log.header.emplace_back(line.substr(1, eq - 1), line.substr(eq + 1));
      continue;
    }
    try {
      log.records.push_back(parse_log_record(line));
    } catch (const Error& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

}  // namespace esr
