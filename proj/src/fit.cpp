#include "esrlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>

#include <absl/container/flat_hash_map.h>

#include "esrlab/error.hpp"
#include "esrlab/hash.hpp"
#include "esrlab/parallel.hpp"
#include "esrlab/rng.hpp"
#include "esrlab/text.hpp"

namespace esr {

FitConfig FitConfig::esr() { return FitConfig{}; }

FitConfig FitConfig::gp() {
  FitConfig c;
  c.restarts = 1;
  c.max_iters = 10;
  c.restart_seconds = 0.0;
  c.patience = 0;
  return c;
}

std::uint64_t entry_seed(std::uint64_t seed, std::uint64_t hash) { return derive_seed(seed, hash); }

FitResult fit(const Expr& e, const Dataset& data, ObjectiveKind kind, const FitConfig& cfg, std::uint64_t seed) {
  const Objective obj(e, data, kind);
  const std::size_t P = obj.params();
  FitResult out;
  out.objective = std::numeric_limits<double>::infinity();

  if (obj.dim() == 0) {
    out.objective = obj.value({});
    out.evaluations = 1;
    out.restarts_used = 1;
    out.degenerate = !std::isfinite(out.objective);
    if (out.degenerate) out.objective = std::numeric_limits<double>::infinity();
    return out;
  }

  const std::vector<double> hyper0 = kind == ObjectiveKind::Mnr ? obj.hyper_start() : std::vector<double>{};
  // Without parameters the start point is deterministic, so one run suffices.
  const int restarts = P == 0 ? 1 : std::max(1, cfg.restarts);
  Rng rng(seed);
  LbfgsOptions lo;
  lo.max_iters = cfg.max_iters;
  lo.rel_tol = cfg.rel_tol;
  lo.abs_tol = cfg.abs_tol;
  const ValueGradFn fdf = [&](std::span<const double> z, std::span<double> g) { return obj.value_grad(z, g); };

  std::vector<double> best;
  int stale = 0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> z(obj.dim());
    for (std::size_t k = 0; k < P; ++k) z[k] = rng.uniform(cfg.init_lo, cfg.init_hi);
    for (std::size_t k = 0; k < hyper0.size(); ++k) z[P + k] = hyper0[k];
    if (cfg.restart_seconds > 0.0) {
      lo.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(cfg.restart_seconds));
    }
    const LbfgsResult lr = lbfgs_minimize(fdf, z, lo);
    out.evaluations += lr.evaluations;
    out.gradient_evaluations += lr.evaluations;
    out.reasons.push_back(lr.status);
    out.restarts_used = r + 1;
    const bool finite = std::isfinite(lr.f);
    if (finite && lr.f < out.objective - cfg.abs_tol) {
      stale = 0;
    } else {
      ++stale;
    }
    if (finite && lr.f < out.objective) {
      out.objective = lr.f;
      best = z;
    }
    if (cfg.patience > 0 && stale >= cfg.patience) break;
  }
  if (best.empty()) {
    out.degenerate = true;
    out.objective = std::numeric_limits<double>::infinity();
    return out;
  }
  out.theta.assign(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(P));
  if (kind == ObjectiveKind::Mnr) {
    const MnrParams mp = Objective::unpack(best, P);
    out.hyper = {mp.mu, mp.omega, mp.sigma_int};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Results files

namespace {

std::string header(const Catalog& c, const Dataset& data, const CatalogFitOptions& opt) {
  std::string h;
  h += "#objective=" + std::string(objective_name(opt.objective)) + '\n';
  h += "#data=" + data.name + '\n';
  h += "#catalog_rules=" + c.rules_id + '\n';
  h += "#catalog_max_len=" + std::to_string(c.max_len) + '\n';
  h += "#seed=" + std::to_string(opt.seed) + '\n';
  h += "#restarts=" + std::to_string(opt.fit.restarts) + '\n';
  h += "#patience=" + std::to_string(opt.fit.patience) + '\n';
  return h;
}

}  // namespace

std::string format_record(const FitRecord& r) {
  std::string s = format_hash(r.hash);
  s += '\t';
  s += format_double(r.objective);
  s += '\t';
  s += std::to_string(r.evaluations);
  s += '\t';
  s += join_doubles(r.theta);
  if (!r.hyper.empty()) {
    s += '\t';
    s += join_doubles(r.hyper);
  }
  return s;
}

FitRecord parse_record(std::string_view line) {
  const auto f = split(line, '\t');
  if (f.size() < 4 || f.size() > 5) throw DataError("results line needs 4 or 5 fields");
  FitRecord r;
  r.hash = parse_hash(f[0]);
  r.objective = parse_double(f[1]);
  r.evaluations = static_cast<long>(parse_double(f[2]));
  r.theta = split_doubles(f[3]);
  if (f.size() == 5) r.hyper = split_doubles(f[4]);
  return r;
}

std::vector<FitRecord> load_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results " + path.string());
  std::vector<FitRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(parse_record(line));
    } catch (const Error& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

bool fit_catalog(const Catalog& c, const Dataset& data, const CatalogFitOptions& opt,
                 const std::filesystem::path& out) {
  std::filesystem::path partial = out;
  partial += ".partial";
  const std::string head = header(c, data, opt);

  // Resume: reuse records from a partial file written with identical settings.
  absl::flat_hash_map<std::uint64_t, FitRecord> done;
  if (std::filesystem::exists(partial)) {
    std::ifstream in(partial);
    std::string line, seen_head;
    bool body = false;
    while (std::getline(in, line)) {
      if (!body && line.starts_with("#")) {
        seen_head += line + '\n';
        continue;
      }
      body = true;
      if (seen_head != head) break;
      try {
        FitRecord r = parse_record(line);
        done.emplace(r.hash, std::move(r));
      } catch (const Error&) {
        break;  // torn final line from an interrupted write
      }
    }
    if (seen_head != head) done.clear();
  }

  std::ofstream log(partial, std::ios::trunc);
  if (!log) throw IoError("cannot write " + partial.string());
  log << head;
  for (const auto& entry : c.entries()) {
    if (auto it = done.find(entry.hash); it != done.end()) log << format_record(it->second) << '\n';
  }
  log.flush();

  std::vector<FitRecord> records(c.size());
  std::vector<char> have(c.size(), 0);
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (auto it = done.find(c.entries()[i].hash); it != done.end()) {
      records[i] = it->second;
      have[i] = 1;
    } else {
      todo.push_back(i);
    }
  }

  std::mutex log_mutex;
  std::atomic<bool> interrupted{false};
  parallel_for(todo.size(), opt.workers, [&](std::size_t k) {
    if (opt.stop != nullptr && opt.stop->load()) {
      interrupted = true;
      return;
    }
    const std::size_t i = todo[k];
    const CatalogEntry& e = c.entries()[i];
    const FitResult fr = fit(e.expr, data, opt.objective, opt.fit, entry_seed(opt.seed, e.hash));
    FitRecord r{e.hash, fr.objective, fr.evaluations, fr.theta, fr.hyper};
    std::lock_guard lock(log_mutex);
    log << format_record(r) << '\n';
    if (k % 256 == 0) log.flush();
    records[i] = std::move(r);
    have[i] = 1;
  });
  log.flush();
  if (!log) throw IoError("write failed for " + partial.string());
  if (interrupted || std::find(have.begin(), have.end(), 0) != have.end()) return false;
  log.close();

  std::filesystem::path tmp = out;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << head;
    for (const FitRecord& r : records) f << format_record(r) << '\n';
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, out);
  std::filesystem::remove(partial);
  return true;
}

}  // namespace esr
