#pragma once

#include <cstdint>
#include <vector>

#include "esrlab/catalog.hpp"
#include "esrlab/dataset.hpp"
#include "esrlab/fit.hpp"
#include "esrlab/runlog.hpp"

namespace esr {

/// Fit of every catalog entry, in catalog order. A given entry's fit is the
/// same in every run, so it is computed once.
std::vector<FitRecord> fit_entries(const Catalog& c, const Dataset& data, ObjectiveKind objective,
                                   const FitConfig& cfg, std::uint64_t seed, unsigned workers);

/// Results file rows reordered to match the catalog. Throws DataError if an
/// entry is missing.
std::vector<FitRecord> align_results(const Catalog& c, const std::vector<FitRecord>& results);

/// Uniform permutation of [0, n) for run `run`.
std::vector<std::uint32_t> rs_order(std::size_t n, std::uint64_t seed, int run);

/// One random-search run: every entry once, in rs_order. Each record counts
/// one visited expression; fevals accumulates the entries' fit effort.
RunLog rs_run(const Catalog& c, const std::vector<FitRecord>& fits, std::uint64_t seed, int run);

std::vector<RunLog> run_rs(const Catalog& c, const Dataset& data, ObjectiveKind objective, const FitConfig& cfg,
                           int runs, std::uint64_t seed, unsigned workers);

}  // namespace esr
