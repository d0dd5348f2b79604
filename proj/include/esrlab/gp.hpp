#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "esrlab/dataset.hpp"
#include "esrlab/expr.hpp"
#include "esrlab/fit.hpp"
#include "esrlab/objectives.hpp"
#include "esrlab/rng.hpp"
#include "esrlab/runlog.hpp"

namespace esr {

struct GpConfig {
  int pop_size = 100;
  int generations = 250;
  int min_depth = 2;
  int max_depth = 4;
  int tournament_size = 2;
  double cx_prob = 1.0;
  double mut_prob = 0.25;
  int max_length = 10;
  ObjectiveKind objective = ObjectiveKind::Mse;
  int optim_iterations = 10;
  std::uint64_t seed = 1;

  /// Table presets for length limits 10, 12 and 20.
  static GpConfig preset(int max_length);
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// key = value lines using the names above; '#' starts a comment. Unknown
/// keys are a ConfigError. Missing keys keep `base` values.
GpConfig parse_gp_config(std::string_view text, const GpConfig& base = {});
GpConfig load_gp_config(const std::filesystem::path& path, const GpConfig& base = {});
std::string format_gp_config(const GpConfig& c);

struct Individual {
  Expr expr;
  std::vector<double> theta;
  double fitness = 0.0;
  long eval_id = 0;
};

/// Random tree in the TinyGP manner: below min_depth always an operator,
/// at max_depth a terminal, otherwise an operator for `full`, a coin flip for
/// grow. Parameters are left unnumbered (all p1); callers renumber.
Expr random_tree(Rng& rng, bool full, int min_depth, int max_depth);

/// Best of k uniform draws with replacement; ties broken uniformly.
const Individual& tournament_select(std::span<const Individual> pop, int k, Rng& rng);

/// Parent 1 with a uniformly chosen node replaced by a uniformly chosen
/// subtree of parent 2, with probability p_cx; otherwise parent 1.
Expr crossover(const Expr& a, const Expr& b, double p_cx, Rng& rng);

/// Preorder walk with a Bernoulli(p_mut) trial per node; the first hit is
/// replaced by a grow tree of depth at most 2. As in TinyGP the minimum
/// depth still applies to that tree.
Expr mutate(const Expr& e, double p_mut, Rng& rng, int min_depth = 0);

class GpRun {
 public:
  GpRun(const GpConfig& cfg, const Dataset& data);

  /// Resampled ramped half-and-half population; every member finite.
  std::vector<Individual> init_population();
  /// Full run. The header carries the config echo and, under pop_best, the
  /// best fitness of each generation's population after elitism.
  RunLog run();

  long resampled() const { return resampled_; }

 private:
  Individual evaluate(const Expr& e, int gen);

  GpConfig cfg_;
  const Dataset& data_;
  Rng rng_;
  RunLog log_;
  long evals_ = 0;
  long fevals_ = 0;
  long resampled_ = 0;
  // structural hash -> semantic hash, per run
  absl::flat_hash_map<std::uint64_t, std::uint64_t> sem_cache_;
};

inline RunLog run_gp(const GpConfig& cfg, const Dataset& data) { return GpRun(cfg, data).run(); }

}  // namespace esr
