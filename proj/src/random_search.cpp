#include "esrlab/random_search.hpp"

#include <numeric>

#include "esrlab/error.hpp"
#include "esrlab/parallel.hpp"
#include "esrlab/rng.hpp"

namespace esr {

std::vector<FitRecord> fit_entries(const Catalog& c, const Dataset& data, ObjectiveKind objective,
                                   const FitConfig& cfg, std::uint64_t seed, unsigned workers) {
  std::vector<FitRecord> out(c.size());
  parallel_for(c.size(), workers, [&](std::size_t i) {
    const CatalogEntry& e = c.entries()[i];
    const FitResult fr = fit(e.expr, data, objective, cfg, entry_seed(seed, e.hash));
    out[i] = FitRecord{e.hash, fr.objective, fr.evaluations, fr.theta, fr.hyper};
  });
  return out;
}

std::vector<FitRecord> align_results(const Catalog& c, const std::vector<FitRecord>& results) {
  absl::flat_hash_map<std::uint64_t, const FitRecord*> by_hash;
  for (const FitRecord& r : results) by_hash.emplace(r.hash, &r);
  std::vector<FitRecord> out;
  out.reserve(c.size());
  for (const CatalogEntry& e : c.entries()) {
    auto it = by_hash.find(e.hash);
    if (it == by_hash.end()) throw DataError("results lack catalog entry " + format_hash(e.hash));
    out.push_back(*it->second);
  }
  return out;
}

std::vector<std::uint32_t> rs_order(std::size_t n, std::uint64_t seed, int run) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(run)));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

RunLog rs_run(const Catalog& c, const std::vector<FitRecord>& fits, std::uint64_t seed, int run) {
  if (fits.size() != c.size()) throw Error("fit table does not match catalog");
  RunLog log;
  log.set("algorithm", "rs");
  log.set("seed", std::to_string(seed));
  log.set("run", std::to_string(run));
  log.set("catalog_size", std::to_string(c.size()));
  log.records.reserve(c.size());
  long fevals = 0;
  long id = 0;
  for (std::uint32_t i : rs_order(c.size(), seed, run)) {
    const CatalogEntry& e = c.entries()[i];
    const FitRecord& f = fits[i];
    fevals += f.evaluations;
    LogRecord r;
    r.eval_id = ++id;
    r.struct_hash = structural_hash(e.expr);
    r.sem_hash = e.hash;
    r.fitness = f.objective;
    r.expr = render(e.expr);
    r.fevals = fevals;
    r.theta = f.theta;
    log.records.push_back(std::move(r));
  }
  return log;
}

std::vector<RunLog> run_rs(const Catalog& c, const Dataset& data, ObjectiveKind objective, const FitConfig& cfg,
                           int runs, std::uint64_t seed, unsigned workers) {
  const std::vector<FitRecord> fits = fit_entries(c, data, objective, cfg, seed, workers);
  std::vector<RunLog> logs(static_cast<std::size_t>(runs));
  parallel_for(logs.size(), workers, [&](std::size_t r) { logs[r] = rs_run(c, fits, seed, static_cast<int>(r)); });
  return logs;
}

}  // namespace esr
