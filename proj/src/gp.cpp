#include "esrlab/gp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "esrlab/enumerate.hpp"
#include "esrlab/error.hpp"
#include "esrlab/simplify.hpp"
#include "esrlab/text.hpp"

namespace esr {

namespace {

constexpr Op kFunctions[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::PowAbs, Op::Inv};
constexpr int kMaxResample = 10000;
constexpr double kInf = std::numeric_limits<double>::infinity();

int parse_int(std::string_view key, std::string_view v) {
  const double d = parse_double(v);
  if (d != std::floor(d) || std::fabs(d) > 1e9) throw ConfigError(std::string(key) + " must be an integer");
  return static_cast<int>(d);
}

}  // namespace

GpConfig GpConfig::preset(int max_length) {
  GpConfig c;
  c.max_length = max_length;
  if (max_length >= 20) {
    c.pop_size = 500;
    c.tournament_size = 4;
  }
  return c;
}

void GpConfig::validate() const {
  if (pop_size < 1) throw ConfigError("pop_size must be >= 1");
  if (generations < 0) throw ConfigError("generations must be >= 0");
  if (min_depth < 0 || max_depth < min_depth) throw ConfigError("need 0 <= min_depth <= max_depth");
  if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
  if (!(cx_prob >= 0.0 && cx_prob <= 1.0)) throw ConfigError("cx_prob must be in [0, 1]");
  if (!(mut_prob >= 0.0 && mut_prob <= 1.0)) throw ConfigError("mut_prob must be in [0, 1]");
  if (max_length < 1) throw ConfigError("max_length must be >= 1");
  if (optim_iterations < 1) throw ConfigError("optim_iterations must be >= 1");
}

GpConfig parse_gp_config(std::string_view text, const GpConfig& base) {
  GpConfig c = base;
  std::size_t lineno = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
    try {
      if (key == "pop_size") c.pop_size = parse_int(key, val);
      else if (key == "generations") c.generations = parse_int(key, val);
      else if (key == "min_depth") c.min_depth = parse_int(key, val);
      else if (key == "max_depth") c.max_depth = parse_int(key, val);
      else if (key == "tournament_size") c.tournament_size = parse_int(key, val);
      else if (key == "cx_prob") c.cx_prob = parse_double(val);
      else if (key == "mut_prob") c.mut_prob = parse_double(val);
      else if (key == "max_length") c.max_length = parse_int(key, val);
      else if (key == "objective") c.objective = parse_objective(val);
      else if (key == "optim_iterations") c.optim_iterations = parse_int(key, val);
      else if (key == "seed") c.seed = static_cast<std::uint64_t>(std::stoull(std::string(val)));
      else throw ConfigError("unknown key '" + std::string(key) + "'");
    } catch (const DataError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::logic_error&) {
      throw ConfigError("line " + std::to_string(lineno) + ": bad value for " + std::string(key));
    }
  }
  c.validate();
  return c;
}

GpConfig load_gp_config(const std::filesystem::path& path, const GpConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_gp_config(ss.str(), base);
}

std::string format_gp_config(const GpConfig& c) {
  std::string s;
  auto line = [&](const char* k, const std::string& v) { s += std::string(k) + " = " + v + '\n'; };
  line("max_length", std::to_string(c.max_length));
  line("pop_size", std::to_string(c.pop_size));
  line("generations", std::to_string(c.generations));
  line("min_depth", std::to_string(c.min_depth));
  line("max_depth", std::to_string(c.max_depth));
  line("tournament_size", std::to_string(c.tournament_size));
  line("cx_prob", format_double(c.cx_prob));
  line("mut_prob", format_double(c.mut_prob));
  line("objective", std::string(objective_name(c.objective)));
  line("optim_iterations", std::to_string(c.optim_iterations));
  line("seed", std::to_string(c.seed));
  return s;
}

// ---------------------------------------------------------------------------
// Operators

namespace {

void grow_into(std::vector<Node>& out, Rng& rng, bool full, int min_depth, int max_depth, int depth) {
  bool function;
  if (depth < min_depth || (depth < max_depth && full)) {
    function = true;
  } else if (depth >= max_depth) {
    function = false;
  } else {
    function = rng.bernoulli(0.5);
  }
  if (!function) {
    if (rng.bernoulli(0.5)) {
      out.push_back(Node{Op::Var, 0, 0.0});
    } else {
      out.push_back(Node{Op::Param, 1, 0.0});
    }
    return;
  }
  const Op op = kFunctions[rng.below(std::size(kFunctions))];
  out.push_back(Node{op, 0, 0.0});
  for (int k = 0; k < arity(op); ++k) grow_into(out, rng, full, min_depth, max_depth, depth + 1);
}

}  // namespace

Expr random_tree(Rng& rng, bool full, int min_depth, int max_depth) {
  std::vector<Node> nodes;
  grow_into(nodes, rng, full, min_depth, max_depth, 0);
  return Expr::from_preorder(std::move(nodes));
}

const Individual& tournament_select(std::span<const Individual> pop, int k, Rng& rng) {
  std::size_t best = rng.below(pop.size());
  int ties = 1;
  for (int i = 1; i < k; ++i) {
    const std::size_t c = rng.below(pop.size());
    if (pop[c].fitness < pop[best].fitness) {
      best = c;
      ties = 1;
    } else if (pop[c].fitness == pop[best].fitness) {
      // Reservoir sampling over the tied draws.
      ++ties;
      if (rng.below(static_cast<std::uint64_t>(ties)) == 0) best = c;
    }
  }
  return pop[best];
}

Expr crossover(const Expr& a, const Expr& b, double p_cx, Rng& rng) {
  if (!rng.bernoulli(p_cx)) return a;
  const std::size_t at = rng.below(a.size());
  const std::size_t from = rng.below(b.size());
  return a.replace_subtree(at, b.subtree(from));
}

Expr mutate(const Expr& e, double p_mut, Rng& rng, int min_depth) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (rng.bernoulli(p_mut)) return e.replace_subtree(i, random_tree(rng, false, std::min(min_depth, 2), 2));
  }
  return e;
}

// ---------------------------------------------------------------------------
// Run

GpRun::GpRun(const GpConfig& cfg, const Dataset& data) : cfg_(cfg), data_(data), rng_(cfg.seed) {
  cfg_.validate();
  const std::string echo = format_gp_config(cfg_);
  for (std::string_view l : split(echo, '\n')) {
    const auto eq = l.find(" = ");
    if (eq != std::string_view::npos) log_.set(std::string(l.substr(0, eq)), std::string(l.substr(eq + 3)));
  }
  log_.set("algorithm", "gp");
  log_.set("data", data.name);
}

Individual GpRun::evaluate(const Expr& raw, int gen) {
  const Expr e = raw.fresh_params();
  Individual ind{e, {}, kInf, ++evals_};
  LogRecord rec;
  rec.gen = gen;
  rec.eval_id = ind.eval_id;
  rec.struct_hash = structural_hash(e);
  rec.expr = render(e);
  if (static_cast<int>(length(e)) > cfg_.max_length) {
    rec.has_sem = false;
  } else {
    FitConfig fc = FitConfig::gp();
    fc.max_iters = cfg_.optim_iterations;
    const FitResult fr = fit(e, data_, cfg_.objective, fc, rng_.next());
    fevals_ += fr.evaluations;
    ind.theta = fr.theta;
    if (std::isfinite(fr.objective)) ind.fitness = fr.objective;
    auto [it, inserted] = sem_cache_.try_emplace(rec.struct_hash, 0);
    if (inserted) it->second = canonicalize(e, kSearchEqsat).hash;
    rec.sem_hash = it->second;
  }
  rec.fitness = ind.fitness;
  rec.fevals = fevals_;
  rec.theta = ind.theta;
  log_.records.push_back(std::move(rec));
  return ind;
}

std::vector<Individual> GpRun::init_population() {
  const int lo = std::max(cfg_.min_depth, std::min(3, cfg_.max_depth));
  const int depths = cfg_.max_depth - lo + 1;
  std::vector<Individual> pop;
  pop.reserve(static_cast<std::size_t>(cfg_.pop_size));
  for (int i = 0; i < cfg_.pop_size; ++i) {
    const int slot = i % (2 * depths);
    const int depth = lo + slot / 2;
    const bool full = slot % 2 == 1;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxResample) {
        throw ConfigError("no finite individual after " + std::to_string(kMaxResample) +
                          " attempts; check max_length and depths");
      }
      const Expr e = random_tree(rng_, full, cfg_.min_depth, depth).fresh_params();
      if (static_cast<int>(length(e)) > cfg_.max_length) {
        ++resampled_;
        continue;
      }
      // Rejected candidates are fitted but not logged; their effort still counts.
      const std::size_t mark = log_.records.size();
      const long id = evals_;
      Individual ind = evaluate(e, 0);
      if (std::isfinite(ind.fitness)) {
        pop.push_back(std::move(ind));
        break;
      }
      log_.records.resize(mark);
      evals_ = id;
      ++resampled_;
    }
  }
  return pop;
}

RunLog GpRun::run() {
  std::vector<Individual> pop = init_population();
  auto best_of = [](const std::vector<Individual>& p) {
    return std::min_element(p.begin(), p.end(),
                            [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
  };
  Individual elite = *best_of(pop);
  std::vector<double> pop_best{elite.fitness};

  for (int gen = 1; gen <= cfg_.generations; ++gen) {
    std::vector<Individual> next;
    next.reserve(pop.size());
    for (int i = 0; i < cfg_.pop_size; ++i) {
      const Individual& a = tournament_select(pop, cfg_.tournament_size, rng_);
      const Individual& b = tournament_select(pop, cfg_.tournament_size, rng_);
      const Expr child = mutate(crossover(a.expr, b.expr, cfg_.cx_prob, rng_), cfg_.mut_prob, rng_, cfg_.min_depth);
      next.push_back(evaluate(child, gen));
    }
    pop = std::move(next);
    const bool present = std::any_of(pop.begin(), pop.end(), [&](const Individual& ind) {
      return ind.fitness == elite.fitness && ind.expr == elite.expr;
    });
    if (!present) {
      const auto worst = std::max_element(
          pop.begin(), pop.end(), [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
      *worst = elite;
    }
    const auto it = best_of(pop);
    if (it->fitness < elite.fitness) elite = *it;
    pop_best.push_back(best_of(pop)->fitness);
  }
  log_.set("resampled", std::to_string(resampled_));
  log_.set("pop_best", join_doubles(pop_best));
  return std::move(log_);
}

}  // namespace esr
