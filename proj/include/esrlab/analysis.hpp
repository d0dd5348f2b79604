#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "esrlab/catalog.hpp"
#include "esrlab/fit.hpp"
#include "esrlab/runlog.hpp"

namespace esr {

enum class EcdfAxis { Visited, Fevals };
/// "visited" or "fevals"; throws ConfigError otherwise.
EcdfAxis parse_axis(std::string_view s);

struct Ecdf {
  double threshold = 0.0;
  /// Per run: position of the first record with fitness <= threshold on the
  /// chosen axis, or -1 when the run never gets there.
  std::vector<long> first;
  /// Step points (x, fraction of runs succeeded by x), x ascending.
  std::vector<std::pair<long, double>> curve;

  /// Success probability after budget x.
  double at(long x) const;
};

/// First-success positions of one log for each threshold.
std::vector<long> first_success(const RunLog& log, const std::vector<double>& thresholds, EcdfAxis axis);
/// Curves from per-run first-success positions (one inner vector per run).
std::vector<Ecdf> make_ecdfs(const std::vector<double>& thresholds, const std::vector<std::vector<long>>& per_run);
std::vector<Ecdf> ecdf(const std::vector<RunLog>& logs, const std::vector<double>& thresholds, EcdfAxis axis);
void write_ecdf_tsv(std::ostream& out, const std::vector<Ecdf>& curves);

struct DupRow {
  int gen = 0;
  long records = 0;   // in-length evaluations of this generation
  double expr = 0.0;  // distinct (structure, theta rounded) / records
  double structures = 0.0;
  double simplified = 0.0;
  double constant = 0.0;  // simplifies to a single parameter or literal
  // The same over generations 0..gen.
  double cum_expr = 0.0;
  double cum_structures = 0.0;
  double cum_simplified = 0.0;
  double cum_constant = 0.0;
};

struct DupStats {
  std::vector<DupRow> rows;
  long visited = 0;     // all records, over-length included
  long over_length = 0;
  /// |visited semantic hashes in catalog| / |catalog|, when a catalog was given.
  std::optional<double> coverage;
};

/// Caches the constant check by semantic hash across calls.
class ConstantOracle {
 public:
  bool operator()(const LogRecord& r);

 private:
  absl::flat_hash_map<std::uint64_t, bool> cache_;
};

DupStats duplicate_stats(const RunLog& log, const Catalog* catalog = nullptr);
DupStats duplicate_stats(const RunLog& log, const Catalog* catalog, ConstantOracle& oracle);
void write_dups_tsv(std::ostream& out, const DupStats& s);

struct Baseline {
  std::string label;
  double objective = 0.0;
};

struct FitnessDistribution {
  long entries = 0;
  long finite = 0;
  std::vector<std::pair<double, double>> quantiles;  // (p, value) over finite objectives
  std::vector<std::pair<Baseline, double>> better;   // fraction of all entries strictly better
  std::vector<FitRecord> top;                        // best first
};

inline const std::vector<double> kDefaultQuantiles{0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};

/// Linear interpolation between order statistics of the sorted values.
double quantile_sorted(const std::vector<double>& sorted, double p);

FitnessDistribution fitness_distribution(const std::vector<FitRecord>& results, const std::vector<Baseline>& baselines,
                                         std::size_t top_k = 5, const std::vector<double>& probs = kDefaultQuantiles);
/// Sections "quantile", "better", "top"; expressions are looked up in the
/// catalog when one is given.
void write_dist_tsv(std::ostream& out, const FitnessDistribution& d, const Catalog* catalog);

}  // namespace esr
