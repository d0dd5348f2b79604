#include <gtest/gtest.h>

#include <cmath>

#include "esrlab/egraph.hpp"
#include "esrlab/enumerate.hpp"
#include "esrlab/error.hpp"
#include "esrlab/eval.hpp"
#include "esrlab/rng.hpp"
#include "esrlab/rules.hpp"
#include "esrlab/simplify.hpp"
#include "oracles.hpp"

using namespace esr;

namespace {

std::uint64_t sem(const char* s) { return canonicalize(parse(s), kSearchEqsat).hash; }
std::string canon(const char* s) { return render(canonicalize(parse(s), kSearchEqsat).expression); }

}  // namespace

TEST(EGraph, HashConsAndCongruence) {
  EGraph g;
  const ClassId a = g.add({Op::Var, 0, 0, 0});
  const ClassId b = g.add({Op::Var, 0, 0, 1});
  EXPECT_EQ(g.add({Op::Var, 0, 0, 0}), a);
  const ClassId fa = g.add({Op::Inv, a, 0, 0});
  const ClassId fb = g.add({Op::Inv, b, 0, 0});
  EXPECT_NE(g.find(fa), g.find(fb));
  g.merge(a, b);
  g.rebuild();
  EXPECT_EQ(g.find(fa), g.find(fb));
  EXPECT_EQ(g.find(a), std::min(a, b));
}

TEST(EGraph, FoldingAnalysis) {
  EGraph g;
  const ClassId one = g.add_expr(lit(1.0));
  const ClassId two = g.add_expr(lit(1.0) + lit(1.0));
  g.rebuild();
  EXPECT_TRUE(g.data(two).is_constant(2.0));
  EXPECT_TRUE(g.data(one).nonneg);
  const ClassId pp = g.add_expr(p(1) * p(2));
  const ClassId px = g.add_expr(p(1) * x());
  const ClassId bad = g.add_expr(lit(1.0) / lit(0.0));
  g.rebuild();
  EXPECT_TRUE(g.data(pp).param_only());
  EXPECT_EQ(g.data(px).kind, ClassData::Kind::NotConstant);
  // non-finite folds carry nothing
  EXPECT_EQ(g.data(bad).kind, ClassData::Kind::NotConstant);
  EXPECT_TRUE(g.fold());
  g.rebuild();
  EXPECT_FALSE(g.fold());
}

TEST(Simplify, IntroductionPairs) {
  EXPECT_EQ(sem("x * (x + p1)"), sem("p1 * x + x * x"));
  EXPECT_EQ(sem("p1 * (x + p2)"), sem("p1 * x + p2"));
}

TEST(Simplify, ConstantCollapse) {
  EXPECT_EQ(sem("p1 + p2"), sem("p1"));
  EXPECT_EQ(sem("p1 / p2 ^ p3"), sem("p1"));
  EXPECT_TRUE(simplifies_to_constant(parse("p1 + p2"), kSearchEqsat));
  EXPECT_TRUE(simplifies_to_constant(parse("x / x"), kSearchEqsat));
  EXPECT_FALSE(simplifies_to_constant(parse("x + p1"), kSearchEqsat));
}

TEST(Simplify, TableIdentities) {
  EXPECT_EQ(canon("x - x"), "0");
  EXPECT_EQ(canon("x / x"), "1");
  EXPECT_EQ(canon("0 + x"), "x");
  EXPECT_EQ(canon("1 * x"), "x");
  EXPECT_EQ(canon("|1| ^ x"), "1");
  EXPECT_EQ(canon("|x| ^ 0"), "1");
  EXPECT_EQ(sem("x + x - x"), sem("x"));
  EXPECT_EQ(sem("x * x / x"), sem("x"));
  EXPECT_EQ(sem("x / (1.0 / x)"), sem("x * x"));
  EXPECT_EQ(sem("(x + x) * p1"), sem("x * p1"));
  EXPECT_EQ(sem("1.0 / (1.0 / x)"), sem("x"));
  EXPECT_EQ(sem("abs(x - p1)"), sem("abs(p1 - x)"));
  EXPECT_EQ(sem("|x| ^ p1 * |x| ^ p2"), sem("|x| ^ p1"));
  EXPECT_EQ(sem("x - p1"), sem("x + p1"));
}

TEST(Simplify, DistinctStaysDistinct) {
  EXPECT_NE(sem("x"), sem("p1"));
  EXPECT_NE(sem("x * x"), sem("x"));
  EXPECT_NE(sem("x + p1"), sem("x * p1"));
  EXPECT_NE(sem("|x| ^ p1"), sem("x * p1"));
  EXPECT_NE(sem("1.0 / x"), sem("x"));
  EXPECT_NE(sem("x + 1.0 / x"), sem("x - 1.0 / x"));
}

TEST(Simplify, CanonicalFormIsStable) {
  const CanonicalForm a = canonicalize(parse("p1 * x + p2"), kSearchEqsat);
  const CanonicalForm b = canonicalize(a.expression, kSearchEqsat);
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.expression, b.expression);
  EXPECT_EQ(a.params, 2u);
}

TEST(Simplify, Reports) {
  SaturationReport rep;
  canonicalize(parse("x + p1"), {30, 100000}, &rep);
  EXPECT_EQ(rep.reason, StopReason::Saturated);
  canonicalize(parse("x * (x + (x + x * x))"), {1, 100000}, &rep);
  EXPECT_EQ(rep.reason, StopReason::IterationLimit);
  canonicalize(parse("x * (x + (x + x * x))"), {30, 40}, &rep);
  EXPECT_EQ(rep.reason, StopReason::NodeBudget);
  EXPECT_THROW(canonicalize(parse("x + x * x * x"), {30, 3}), CapacityError);
}

TEST(Simplify, NormalizeLabels) {
  const std::uint32_t h = kHoleVarBase;
  const Expr e = x(h + 7) + p(4) * x(h + 2);
  EXPECT_EQ(normalize_labels(e), x(h) + p(1) * x(h + 1));
}

TEST(Rules, DumpFormat) {
  bool found = false;
  for (const RewriteRule& r : default_rules()) {
    const std::string d = describe(r);
    EXPECT_NE(d.find(" -> "), std::string::npos);
    if (r.name == "div-self") {
      EXPECT_EQ(d, "a / a -> 1 | a != 0");
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(rule_set_id().rfind("rules-", 0), 0u);
}

// Every rule, 1000 random guarded instantiations, equal wherever both sides
// are defined.
TEST(Rules, Soundness) {
  Rng rng(12345);
  for (const RewriteRule& r : default_rules()) {
    int defined = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      double v[4];
      for (std::uint32_t k = 0; k < 4; ++k) {
        Guard g = Guard::None;
        for (const Condition& c : r.conditions) {
          if (c.var == k) g = c.guard;
        }
        v[k] = oracle::draw_guarded(rng, g);
      }
      const double lhs = eval(oracle::substitute(r.lhs, v), {}, 0.0);
      const double rhs = eval(oracle::substitute(r.rhs, v), {}, 0.0);
      if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
      ++defined;
      const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
      const double dev = scale == 0.0 ? 0.0 : std::fabs(lhs - rhs) / scale;
      ASSERT_LE(dev, 1e-12) << r.name << ": " << describe(r) << " a=" << v[0] << " b=" << v[1] << " c=" << v[2]
                            << " d=" << v[3] << " lhs=" << lhs << " rhs=" << rhs;
    }
    EXPECT_GT(defined, 500) << r.name;
  }
}
