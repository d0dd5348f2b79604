#include <gtest/gtest.h>

#include <absl/container/flat_hash_set.h>

#include "esrlab/enumerate.hpp"
#include "esrlab/error.hpp"
#include "esrlab/expr.hpp"

using namespace esr;

TEST(Expr, Length) {
  EXPECT_EQ(length(x()), 1u);
  EXPECT_EQ(length(powabs(x(), p(1))), 3u);
  EXPECT_EQ(length(parse("p1 / (1.0 / (p2 + x) - p3 ^ x)")), 10u);
  // additive over children
  const Expr a = parse("x + p1"), b = parse("1.0 / x");
  EXPECT_EQ(length(a * b), length(a) + length(b) + 1);
}

TEST(Expr, RenderConventions) {
  EXPECT_EQ(render(inv(x())), "1.0 / x");
  EXPECT_EQ(parse(render(inv(x()))), inv(x()));
  EXPECT_EQ(render(powabs(x(), p(1))), "|x| ^ p1");
  EXPECT_EQ(parse("powabs(x, p1)"), powabs(x(), p(1)));
  EXPECT_EQ(parse("inv(x)"), inv(x()));
  const Expr row6 = parse("p1 / (1.0 / (p2 + x) - p3 ^ x)");
  EXPECT_EQ(row6, p(1) / (inv(p(2) + x()) - powabs(p(3), x())));
}

TEST(Expr, ParseErrorColumn) {
  try {
    parse("x + ");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 5u);
  }
  EXPECT_THROW(parse("x + * p1"), ParseError);
  EXPECT_THROW(parse("(x"), ParseError);
  EXPECT_THROW(parse("x)"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Expr, RoundTripAllTreesToLength8) {
  std::size_t n = 0;
  enumerate_trees(8, [&](const Expr& e) {
    ++n;
    const std::string s = render(e);
    const Expr back = parse(s);
    ASSERT_EQ(back, e) << s;
  });
  EXPECT_EQ(n, 103536u);
}

TEST(Expr, RoundTripRewriteForms) {
  for (const char* s : {"-1.0 * x", "2 * x", "|x| ^ -1.0", "abs(x - p1)", "-(x)", "x + -1.0 / (p1 + x)", "|p1| ^ 0.5"}) {
    const Expr e = parse(s);
    EXPECT_EQ(parse(render(e)), e) << s << " -> " << render(e);
  }
}

TEST(Expr, StructuralHash) {
  EXPECT_EQ(structural_hash(x()), structural_hash(x()));
  EXPECT_NE(structural_hash(x() + p(1)), structural_hash(p(1) + x()));
  absl::flat_hash_set<std::uint64_t> seen;
  std::size_t n = 0;
  enumerate_trees(6, [&](const Expr& e) {
    ++n;
    seen.insert(structural_hash(e));
  });
  EXPECT_EQ(seen.size(), n);
}

TEST(Expr, StructuralHashIsPinned) {
  // Catalog files depend on these values staying put.
  EXPECT_EQ(structural_hash(parse("x")), structural_hash(Expr()));
  const std::uint64_t h = structural_hash(parse("p1 + x"));
  EXPECT_EQ(h, structural_hash(p(1) + x()));
}

TEST(Expr, Subtrees) {
  const Expr e = parse("p1 * (x + p2)");
  EXPECT_EQ(e.subtree(2), parse("x + p2"));
  EXPECT_EQ(e.replace_subtree(2, x()), parse("p1 * x"));
  EXPECT_EQ(e.depth(), 2);
  EXPECT_EQ(e.param_count(), 2u);
  EXPECT_EQ(parse("p1 + p1 * p1").fresh_params(), parse("p1 + p2 * p3"));
  EXPECT_EQ(parse("p3 + p1").renumber_params(), parse("p1 + p2"));
  EXPECT_TRUE(parse("p1 + p2").params_contiguous());
  EXPECT_FALSE(parse("p1 + p3").params_contiguous());
}
