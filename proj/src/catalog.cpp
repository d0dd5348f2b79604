#include "esrlab/catalog.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "esrlab/error.hpp"

namespace esr {

bool Catalog::insert(CatalogEntry entry) {
  const auto [it, inserted] = index_.try_emplace(entry.hash, static_cast<std::uint32_t>(entries_.size()));
  if (!inserted) return false;
  entries_.push_back(std::move(entry));
  return true;
}

const CatalogEntry* Catalog::lookup(std::uint64_t hash) const {
  const auto it = index_.find(hash);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::string format_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t parse_hash(std::string_view text) {
  std::uint64_t h = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), h, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.size() != 16) {
    throw DataError("bad hash '" + std::string(text) + "'");
  }
  return h;
}

namespace {

std::string entry_line(const CatalogEntry& e) {
  std::string line = format_hash(e.hash);
  line += '\t';
  line += std::to_string(e.length);
  line += '\t';
  line += std::to_string(e.params);
  line += '\t';
  line += render(e.expr);
  line += '\n';
  return line;
}

std::string crc_hex(std::uint32_t crc) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", crc);
  return buf;
}

}  // namespace

void save_catalog(const Catalog& c, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  try {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << "#grammar=" << c.grammar_id << '\n'
        << "#rules=" << c.rules_id << '\n'
        << "#eqsat_iters=" << c.eqsat.max_iters << '\n'
        << "#node_budget=" << c.eqsat.node_budget << '\n'
        << "#max_len=" << c.max_len << '\n';
    uLong crc = crc32(0L, Z_NULL, 0);
    for (const CatalogEntry& e : c.entries()) {
      const std::string line = entry_line(e);
      crc = crc32(crc, reinterpret_cast<const Bytef*>(line.data()), static_cast<uInt>(line.size()));
      out << line;
    }
    out << "#count=" << c.size() << ",#crc=" << crc_hex(static_cast<std::uint32_t>(crc)) << '\n';
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
    out.close();
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& e) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw IoError(e.what());
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open catalog " + path.string());
  Catalog c;
  std::string line;
  uLong crc = crc32(0L, Z_NULL, 0);
  bool footer = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (footer) throw DataError(where + ": content after footer");
    if (line.starts_with("#count=")) {
      const auto comma = line.find(",#crc=");
      if (comma == std::string::npos) throw DataError(where + ": malformed footer");
      const std::string count = line.substr(7, comma - 7);
      const std::string want = line.substr(comma + 6);
      if (count != std::to_string(c.size())) throw DataError(where + ": entry count mismatch");
      if (want != crc_hex(static_cast<std::uint32_t>(crc))) throw DataError(where + ": checksum mismatch");
      footer = true;
      continue;
    }
    if (line.starts_with("#")) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1), value = line.substr(eq + 1);
      try {
        if (key == "grammar") c.grammar_id = value;
        else if (key == "rules") c.rules_id = value;
        else if (key == "eqsat_iters") c.eqsat.max_iters = std::stoi(value);
        else if (key == "node_budget") c.eqsat.node_budget = std::stoull(value);
        else if (key == "max_len") c.max_len = std::stoi(value);
      } catch (const std::exception&) {
        throw DataError(where + ": bad header value");
      }
      continue;
    }
    const std::string with_nl = line + '\n';
    crc = crc32(crc, reinterpret_cast<const Bytef*>(with_nl.data()), static_cast<uInt>(with_nl.size()));
    std::istringstream fields(line);
    std::string hash, len, params, expr;
    if (!std::getline(fields, hash, '\t') || !std::getline(fields, len, '\t') ||
        !std::getline(fields, params, '\t') || !std::getline(fields, expr)) {
      throw DataError(where + ": expected 4 tab-separated fields");
    }
    CatalogEntry e;
    try {
      e.hash = parse_hash(hash);
      e.length = static_cast<std::uint32_t>(std::stoul(len));
      e.params = static_cast<std::uint32_t>(std::stoul(params));
      e.expr = parse(expr);
    } catch (const ParseError& err) {
      throw DataError(where + ": " + err.what());
    } catch (const std::logic_error&) {
      throw DataError(where + ": bad numeric field");
    }
    if (!c.insert(std::move(e))) throw DataError(where + ": duplicate hash");
  }
  if (!footer) throw DataError(path.string() + ": missing #count footer (truncated file?)");
  return c;
}

}  // namespace esr
