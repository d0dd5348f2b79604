#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "esrlab/catalog.hpp"
#include "esrlab/dataset.hpp"
#include "esrlab/expr.hpp"
#include "esrlab/lbfgs.hpp"
#include "esrlab/objectives.hpp"

namespace esr {

struct FitConfig {
  int restarts = 340;
  double init_lo = -3.0;
  double init_hi = 3.0;
  int max_iters = 1000;
  double rel_tol = 1e-8;
  double abs_tol = 1e-8;
  /// Wall-clock limit per restart; zero disables.
  double restart_seconds = 300.0;
  /// Stop after this many consecutive restarts without an improvement larger
  /// than abs_tol; zero disables.
  int patience = 20;

  /// Exhaustive-search preset: many restarts, tight tolerances.
  static FitConfig esr();
  /// GP inner loop preset: one short quasi-Newton run.
  static FitConfig gp();
};

struct FitResult {
  std::vector<double> theta;
  /// MNR only: mu, omega, sigma_int.
  std::vector<double> hyper;
  /// Minimized value: MSE, or negative log-likelihood for MNR. +inf when degenerate.
  double objective = 0.0;
  int restarts_used = 0;
  long evaluations = 0;
  long gradient_evaluations = 0;
  std::vector<LbfgsStatus> reasons;
  bool degenerate = false;
};

/// Fits the parameters of e. Deterministic given the seed.
FitResult fit(const Expr& e, const Dataset& data, ObjectiveKind kind, const FitConfig& cfg, std::uint64_t seed);

/// Per-entry seed used by catalog fitting and random search.
std::uint64_t entry_seed(std::uint64_t seed, std::uint64_t hash);

struct CatalogFitOptions {
  FitConfig fit = FitConfig::esr();
  ObjectiveKind objective = ObjectiveKind::Mse;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Polled between entries; when set, finished results stay in the
  /// ".partial" file and fit_catalog returns false.
  const std::atomic<bool>* stop = nullptr;
};

struct FitRecord {
  std::uint64_t hash = 0;
  double objective = 0.0;
  long evaluations = 0;
  std::vector<double> theta;
  std::vector<double> hyper;
};

/// Fits every catalog entry and writes the results file at `out` in catalog
/// order. Results already present in "<out>.partial" from an interrupted run
/// with the same settings are reused. Returns true when complete.
bool fit_catalog(const Catalog& c, const Dataset& data, const CatalogFitOptions& opt,
                 const std::filesystem::path& out);

std::vector<FitRecord> load_results(const std::filesystem::path& path);
std::string format_record(const FitRecord& r);
FitRecord parse_record(std::string_view line);

}  // namespace esr
