#include <gtest/gtest.h>

#include <cmath>

#include "esrlab/dataset.hpp"
#include "esrlab/error.hpp"
#include "esrlab/gp.hpp"
#include "esrlab/text.hpp"

using namespace esr;

namespace {

Dataset small_data() {
  Dataset d;
  for (int i = 0; i < 20; ++i) {
    const double x = 0.3 + 0.1 * i;
    d.x.push_back(x);
    d.y.push_back(1.5 * x * x + 0.5);
  }
  return d;
}

std::vector<Individual> ranked(std::vector<double> fit) {
  std::vector<Individual> pop;
  for (std::size_t i = 0; i < fit.size(); ++i) pop.push_back({p(1), {}, fit[i], static_cast<long>(i)});
  return pop;
}

bool all_functions_above(const Expr& e, std::size_t pos, int depth, int min_depth) {
  if (is_leaf(e[pos].op)) return depth >= min_depth;
  std::size_t c = pos + 1;
  for (int k = 0; k < arity(e[pos].op); ++k) {
    if (!all_functions_above(e, c, depth + 1, min_depth)) return false;
    c = e.subtree_end(c);
  }
  return true;
}

}  // namespace

TEST(GpTree, DepthBounds) {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const bool full = trial % 2 == 0;
    const int lo = static_cast<int>(rng.below(3)), hi = lo + static_cast<int>(rng.below(3));
    const Expr e = random_tree(rng, full, lo, hi);
    EXPECT_LE(e.depth(), hi);
    EXPECT_TRUE(all_functions_above(e, 0, 0, lo)) << render(e);
    if (full) EXPECT_EQ(e.depth(), hi);
  }
}

TEST(GpInit, RampedHalfAndHalf) {
  GpConfig c;
  c.pop_size = 50;
  c.max_length = 1000;  // no resampling on length
  const Dataset d = small_data();
  GpRun run(c, d);
  const auto pop = run.init_population();
  ASSERT_EQ(pop.size(), 50u);
  int full_exact = 0, grow = 0;
  for (int i = 0; i < 50; ++i) {
    const int slot = i % 4;
    const int depth = 3 + slot / 2;
    EXPECT_LE(pop[i].expr.depth(), depth);
    EXPECT_GE(pop[i].expr.depth(), c.min_depth);
    EXPECT_TRUE(std::isfinite(pop[i].fitness));
    if (slot % 2 == 1) full_exact += pop[i].expr.depth() == depth;
    else ++grow;
  }
  EXPECT_EQ(full_exact, 25);
  EXPECT_EQ(grow, 25);
}

TEST(GpInit, LengthLimitHolds) {
  GpConfig c;
  c.max_length = 10;
  const Dataset d = small_data();
  GpRun run(c, d);
  for (const auto& ind : run.init_population()) EXPECT_LE(length(ind.expr), 10u);
  EXPECT_GT(run.resampled(), 0);
}

TEST(GpInit, ImpossibleLimitIsConfigError) {
  GpConfig c;
  c.max_length = 2;  // min_depth 2 needs at least 3 nodes
  const Dataset d = small_data();
  GpRun run(c, d);
  EXPECT_THROW(run.init_population(), ConfigError);
}

TEST(GpSelect, TiesAreFair) {
  const auto pop = ranked({1.0, 1.0});
  Rng rng(7);
  const int n = 10000;
  int first = 0;
  for (int i = 0; i < n; ++i) first += tournament_select(pop, 2, rng).eval_id == 0;
  const double sd = std::sqrt(0.25 / n);
  EXPECT_NEAR(static_cast<double>(first) / n, 0.5, 3 * sd);
}

TEST(GpSelect, Extremes) {
  const auto pop = ranked({5.0, 3.0, 9.0, 1.0, 4.0});
  Rng rng(8);
  // Draws are with replacement, so k = 2 returns the worst only when both
  // draws land on it: probability 1/25.
  int worst = 0;
  for (int i = 0; i < 20000; ++i) worst += tournament_select(pop, 2, rng).eval_id == 2;
  EXPECT_NEAR(worst / 20000.0, 0.04, 4 * std::sqrt(0.04 * 0.96 / 20000));
  int best = 0;
  for (int i = 0; i < 1000; ++i) best += tournament_select(pop, 200, rng).eval_id == 3;
  EXPECT_EQ(best, 1000);
  // k = 1 is uniform.
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 50000; ++i) ++hits[tournament_select(pop, 1, rng).eval_id];
  for (int h : hits) EXPECT_NEAR(h / 50000.0, 0.2, 4 * std::sqrt(0.16 / 50000));
}

TEST(GpVariation, Crossover) {
  Rng rng(2);
  const Expr a = parse("x + p1 * x"), b = parse("inv(x) - p1");
  for (int i = 0; i < 200; ++i) EXPECT_EQ(crossover(a, b, 0.0, rng), a);
  bool root_replaced = false;
  for (int i = 0; i < 2000; ++i) {
    const Expr c = crossover(a, b, 1.0, rng);
    EXPECT_LE(length(c), length(a) - 1 + length(b));
    if (c.root().op != Op::Add) root_replaced = true;
  }
  EXPECT_TRUE(root_replaced);
}

TEST(GpVariation, Mutation) {
  Rng rng(3);
  const Expr a = parse("x + p1 * x");
  for (int i = 0; i < 200; ++i) EXPECT_EQ(mutate(a, 0.0, rng), a);
  for (int i = 0; i < 500; ++i) {
    // p_mut = 1 always hits the root.
    const Expr m = mutate(a, 1.0, rng);
    EXPECT_LE(m.depth(), 2);
    const Expr m2 = mutate(a, 1.0, rng, 2);
    EXPECT_EQ(m2.depth(), 2);
  }
}

TEST(GpRunTest, ElitismAndReproducibility) {
  GpConfig c;
  c.pop_size = 30;
  c.generations = 15;
  c.seed = 99;
  const Dataset d = small_data();
  const RunLog a = run_gp(c, d), b = run_gp(c, d);
  ASSERT_EQ(a.records.size(), b.records.size());
  EXPECT_EQ(a.records.size(), 30u * 16u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(format_record(a.records[i]), format_record(b.records[i]));
  }
  const auto best = split_doubles(a.get("pop_best"));
  ASSERT_EQ(best.size(), 16u);
  for (std::size_t g = 1; g < best.size(); ++g) EXPECT_LE(best[g], best[g - 1]);
  long prev = 0;
  for (const auto& r : a.records) {
    if (!r.has_sem) {
      EXPECT_TRUE(std::isinf(r.fitness));
      EXPECT_GT(length(parse(r.expr)), 10u);
    }
    EXPECT_GE(r.fevals, prev);
    prev = r.fevals;
  }
  c.seed = 100;
  const RunLog other = run_gp(c, d);
  EXPECT_NE(format_record(other.records.back()), format_record(a.records.back()));
}

TEST(GpConfigIo, RoundTripAndErrors) {
  GpConfig c = GpConfig::preset(20);
  EXPECT_EQ(c.pop_size, 500);
  EXPECT_EQ(c.tournament_size, 4);
  c.mut_prob = 0.1;
  c.objective = ObjectiveKind::Mnr;
  c.seed = 1234567;
  const GpConfig r = parse_gp_config(format_gp_config(c));
  EXPECT_EQ(format_gp_config(r), format_gp_config(c));
  EXPECT_THROW(parse_gp_config("bogus = 1"), ConfigError);
  EXPECT_THROW(parse_gp_config("pop_size = 0"), ConfigError);
  EXPECT_THROW(parse_gp_config("cx_prob = 1.5"), ConfigError);
  EXPECT_THROW(parse_gp_config("pop_size = ten"), ConfigError);
  EXPECT_EQ(parse_gp_config("# only a comment\npop_size = 7  # trailing\n").pop_size, 7);
}
