#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "esrlab/expr.hpp"
#include "esrlab/simplify.hpp"

namespace esr {

struct CatalogEntry {
  Expr expr;
  std::uint64_t hash = 0;
  std::uint32_t length = 0;
  std::uint32_t params = 0;
};

/// Semantically unique expressions in discovery order, keyed by semantic hash.
class Catalog {
 public:
  int max_len = 0;
  std::string grammar_id;
  std::string rules_id;
  EqsatConfig eqsat;

  /// Appends unless the hash is already present; returns true if appended.
  bool insert(CatalogEntry entry);
  const CatalogEntry* lookup(std::uint64_t hash) const;

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<CatalogEntry> entries_;
  absl::flat_hash_map<std::uint64_t, std::uint32_t> index_;
};

/// Writes atomically (temporary file + rename). Throws IoError.
void save_catalog(const Catalog& c, const std::filesystem::path& path);
/// Throws IoError if unreadable, DataError on malformed content or checksum mismatch.
Catalog load_catalog(const std::filesystem::path& path);

std::string format_hash(std::uint64_t h);
std::uint64_t parse_hash(std::string_view text);

}  // namespace esr
