#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "esrlab/catalog.hpp"
#include "esrlab/expr.hpp"
#include "esrlab/simplify.hpp"

namespace esr {

inline constexpr const char* kGrammarId = "G(E)=x|p|inv(E)|powabs(E,E)|E+E|E-E|E*E|E/E";

/// Calls `sink` for every complete derivation of length <= max_len, each once,
/// in breadth-first order (expanding the first nonterminal). Parameters are
/// numbered p1, p2, ... left to right.
void enumerate_trees(int max_len, const std::function<void(const Expr&)>& sink);

/// Exact number of derivations of each length 1..max_len (index 0 unused).
std::vector<std::uint64_t> count_trees(int max_len);

struct EnumerationStats {
  std::vector<std::uint64_t> partials;   // canonicalized partial derivations per committed length
  std::vector<std::uint64_t> pruned;     // of which pruned as duplicates
  std::vector<std::uint64_t> complete;   // completed trees per length
  std::vector<std::uint64_t> unique;     // new catalog entries per tree length
};

/// Saturation settings used for catalogs and for hashing search logs. The
/// small budget loses no de-duplication at these lengths and keeps the
/// pathological integer-coefficient chains cheap.
inline constexpr EqsatConfig kSearchEqsat{30, 1000};

struct CatalogOptions {
  EqsatConfig eqsat = kSearchEqsat;
  unsigned workers = 1;
  /// Called after each level with (committed length, catalog size so far).
  std::function<void(int, std::size_t)> progress;
};

Catalog build_catalog(int max_len, const CatalogOptions& opt, EnumerationStats* stats = nullptr);

}  // namespace esr
