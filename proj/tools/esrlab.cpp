// esrlab command line front end.
#include <glob.h>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "esrlab/analysis.hpp"
#include "esrlab/catalog.hpp"
#include "esrlab/dataset.hpp"
#include "esrlab/enumerate.hpp"
#include "esrlab/error.hpp"
#include "esrlab/eval.hpp"
#include "esrlab/fit.hpp"
#include "esrlab/gp.hpp"
#include "esrlab/parallel.hpp"
#include "esrlab/random_search.hpp"
#include "esrlab/rules.hpp"
#include "esrlab/simplify.hpp"
#include "esrlab/text.hpp"

namespace fs = std::filesystem;
using namespace esr;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop = true; }

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<fs::path> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (out.empty()) throw IoError("no files match " + pattern);
  return out;  // glob sorts
}

std::string run_name(const char* prefix, int r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03d.log", prefix, r);
  return buf;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (std::string_view f : split(s, ',')) out.push_back(parse_double(trim(f)));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

// Baselines file: one expression per line, optionally TAB theta (comma separated).
// Without theta the expression is fitted with the exhaustive preset.
std::vector<Baseline> load_baselines(const fs::path& path, const Dataset& data, ObjectiveKind kind, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open baselines " + path.string());
  std::vector<Baseline> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split(t, '\t');
    const Expr e = parse(f[0]).renumber_params();
    double obj;
    if (f.size() > 1) {
      const std::vector<double> theta = split_doubles(trim(f[1]));
      const Objective o(e, data, kind);
      std::vector<double> z = theta;
      if (kind == ObjectiveKind::Mnr) {
        const auto h = o.hyper_start();
        z.insert(z.end(), h.begin(), h.end());
      }
      if (z.size() != o.dim()) throw DataError("baseline '" + std::string(f[0]) + "' has the wrong number of values");
      obj = o.value(z);
    } else {
      obj = fit(e, data, kind, FitConfig::esr(), entry_seed(seed, structural_hash(e))).objective;
    }
    out.push_back({render(e), obj});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive symbolic regression and GP search-space lab"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned workers = default_workers();
  std::uint64_t seed = 1;
  app.add_option("--workers", workers, "worker threads (default: ESRLAB_WORKERS or cores)")->check(CLI::PositiveNumber);

  EqsatConfig eq = kSearchEqsat;
  auto eqsat_opts = [&](CLI::App* c) {
    c->add_option("--iters", eq.max_iters, "equality saturation iteration limit");
    c->add_option("--node-budget", eq.node_budget, "e-graph node budget");
  };

  // enumerate
  auto* en = app.add_subcommand("enumerate", "build the catalog of unique expressions");
  int max_len = 0;
  std::string out_path;
  en->add_option("--max-length", max_len, "length limit")->required()->check(CLI::Range(1, 14));
  en->add_option("--out", out_path, "catalog file")->required();
  eqsat_opts(en);

  // fit
  auto* fi = app.add_subcommand("fit", "fit every catalog entry");
  std::string catalog_path, data_path, objective = "mse", results_path;
  int restarts = FitConfig::esr().restarts;
  int patience = FitConfig::esr().patience;
  fi->add_option("--catalog", catalog_path)->required();
  fi->add_option("--data", data_path)->required();
  fi->add_option("--objective", objective, "mse or mnr");
  fi->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  fi->add_option("--patience", patience, "stop after this many restarts without improvement (0: never)");
  fi->add_option("--seed", seed);
  fi->add_option("--out", results_path)->required();

  // gp
  auto* gp = app.add_subcommand("gp", "run the genetic programming engine");
  std::string config_path, log_dir;
  int runs = 50;
  int gp_len = 10;
  gp->add_option("--data", data_path)->required();
  gp->add_option("--config", config_path, "key = value file");
  gp->add_option("--max-length", gp_len, "preset to start from (10, 12, 20)");
  gp->add_option("--objective", objective);
  gp->add_option("--runs", runs)->check(CLI::PositiveNumber);
  gp->add_option("--seed", seed);
  gp->add_option("--log-dir", log_dir)->required();

  // rs
  auto* rs = app.add_subcommand("rs", "random search over a catalog");
  std::string rs_results;
  rs->add_option("--catalog", catalog_path)->required();
  rs->add_option("--data", data_path)->required();
  rs->add_option("--objective", objective);
  rs->add_option("--results", rs_results, "reuse a fit results file instead of fitting");
  rs->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  rs->add_option("--runs", runs)->check(CLI::PositiveNumber);
  rs->add_option("--seed", seed);
  rs->add_option("--log-dir", log_dir)->required();

  // simplify
  auto* si = app.add_subcommand("simplify", "canonical form and semantic hash");
  std::string expr_text;
  si->add_option("--expr", expr_text)->required();
  eqsat_opts(si);

  // rules
  app.add_subcommand("rules", "print the rewrite rules");

  // analyze
  auto* an = app.add_subcommand("analyze", "analyses over logs and results");
  an->require_subcommand(1);
  an->fallthrough();
  auto* ec = an->add_subcommand("ecdf", "success probability curves");
  std::string logs_glob, thresholds, axis = "visited";
  ec->add_option("--logs", logs_glob, "glob of run logs")->required();
  ec->add_option("--thresholds", thresholds, "t1,t2,...")->required();
  ec->add_option("--axis", axis, "visited or fevals");
  ec->add_option("--out", out_path)->required();
  auto* du = an->add_subcommand("dups", "duplicate statistics of one log");
  std::string log_path;
  du->add_option("--log", log_path)->required();
  du->add_option("--catalog", catalog_path);
  du->add_option("--out", out_path)->required();
  auto* di = an->add_subcommand("dist", "fitness distribution of a results file");
  std::string baselines_path;
  std::size_t top_k = 5;
  di->add_option("--results", results_path)->required();
  di->add_option("--baselines", baselines_path, "expressions, optionally TAB theta");
  di->add_option("--data", data_path, "needed with --baselines");
  di->add_option("--objective", objective);
  di->add_option("--catalog", catalog_path, "to print expressions");
  di->add_option("--top", top_k);
  di->add_option("--seed", seed);
  di->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*en) {
      CatalogOptions opt;
      opt.eqsat = eq;
      opt.workers = workers;
      opt.progress = [](int len, std::size_t n) { std::cerr << "length " << len << ": " << n << " unique\n"; };
      const Catalog c = build_catalog(max_len, opt);
      save_catalog(c, out_path);
      std::cout << c.size() << " unique expressions written to " << out_path << '\n';
    } else if (*fi) {
      const Catalog c = load_catalog(catalog_path);
      const Dataset d = load_dataset(data_path);
      CatalogFitOptions opt;
      opt.objective = parse_objective(objective);
      opt.fit.restarts = restarts;
      opt.fit.patience = patience;
      opt.seed = seed;
      opt.workers = workers;
      opt.stop = &g_stop;
      std::signal(SIGINT, on_sigint);
      if (!fit_catalog(c, d, opt, results_path)) {
        std::cerr << "interrupted; rerun the same command to resume from " << results_path << ".partial\n";
        return 130;
      }
      std::cout << c.size() << " fits written to " << results_path << '\n';
    } else if (*gp) {
      GpConfig base = GpConfig::preset(gp_len);
      GpConfig cfg = config_path.empty() ? base : load_gp_config(config_path, base);
      if (gp->count("--objective") > 0) cfg.objective = parse_objective(objective);
      cfg.validate();
      const Dataset d = load_dataset(data_path);
      fs::create_directories(log_dir);
      {
        cfg.seed = seed;
        auto out = open_out(fs::path(log_dir) / "config.txt");
        out << format_gp_config(cfg);
      }
      parallel_for(static_cast<std::size_t>(runs), workers, [&](std::size_t r) {
        GpConfig c = cfg;
        c.seed = derive_seed(seed, r);
        save_runlog(run_gp(c, d), fs::path(log_dir) / run_name("gp", static_cast<int>(r)));
      });
      std::cout << runs << " logs written to " << log_dir << '\n';
    } else if (*rs) {
      const Catalog c = load_catalog(catalog_path);
      const Dataset d = load_dataset(data_path);
      std::vector<FitRecord> fits;
      if (!rs_results.empty()) {
        fits = align_results(c, load_results(rs_results));
      } else {
        FitConfig fc = FitConfig::esr();
        fc.restarts = restarts;
        fits = fit_entries(c, d, parse_objective(objective), fc, seed, workers);
      }
      fs::create_directories(log_dir);
      parallel_for(static_cast<std::size_t>(runs), workers, [&](std::size_t r) {
        save_runlog(rs_run(c, fits, seed, static_cast<int>(r)), fs::path(log_dir) / run_name("rs", static_cast<int>(r)));
      });
      std::cout << runs << " logs written to " << log_dir << '\n';
    } else if (*si) {
      const Expr e = parse(expr_text);
      SaturationReport rep;
      const CanonicalForm cf = canonicalize(e, eq, &rep);
      std::cout << "canonical: " << render(cf.expression) << '\n'
                << "hash: " << format_hash(cf.hash) << '\n'
                << "params: " << cf.params << '\n'
                << "saturation: " << stop_reason_name(rep.reason) << " after " << rep.iterations
                << " iterations, " << rep.nodes << " nodes\n";
    } else if (app.got_subcommand("rules")) {
      std::cout << "# " << rule_set_id() << '\n';
      for (const RewriteRule& r : default_rules()) std::cout << r.name << '\t' << describe(r) << '\n';
    } else if (*ec) {
      const EcdfAxis ax = parse_axis(axis);
      const std::vector<double> ts = parse_list(thresholds);
      std::vector<std::vector<long>> per_run;
      for (const fs::path& p : expand_glob(logs_glob)) {
        const RunLog l = load_runlog(p);
        if (ax == EcdfAxis::Fevals && !l.records.empty() && l.records.back().fevals == 0) {
          throw DataError(p.string() + " carries no function-evaluation counts");
        }
        per_run.push_back(first_success(l, ts, ax));
      }
      auto out = open_out(out_path);
      write_ecdf_tsv(out, make_ecdfs(ts, per_run));
    } else if (*du) {
      const RunLog l = load_runlog(log_path);
      std::optional<Catalog> c;
      if (!catalog_path.empty()) c = load_catalog(catalog_path);
      auto out = open_out(out_path);
      write_dups_tsv(out, duplicate_stats(l, c ? &*c : nullptr));
    } else if (*di) {
      const std::vector<FitRecord> results = load_results(results_path);
      std::vector<Baseline> baselines;
      if (!baselines_path.empty()) {
        if (data_path.empty()) throw ConfigError("--baselines needs --data");
        baselines = load_baselines(baselines_path, load_dataset(data_path), parse_objective(objective), seed);
      }
      std::optional<Catalog> c;
      if (!catalog_path.empty()) c = load_catalog(catalog_path);
      auto out = open_out(out_path);
      write_dist_tsv(out, fitness_distribution(results, baselines, top_k), c ? &*c : nullptr);
    }
  } catch (const Error& e) {
    std::cerr << "esrlab: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "esrlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
