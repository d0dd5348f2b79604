#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>

#include "esrlab/catalog.hpp"
#include "esrlab/enumerate.hpp"
#include "esrlab/error.hpp"
#include "oracles.hpp"

using namespace esr;

TEST(Enumerate, MatchesCountingOracle) {
  const auto counts = count_trees(8);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> seen(9, 0);
  enumerate_trees(8, [&](const Expr& e) { ++seen[length(e)]; });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(seen[n], oracle::trees_of_length(n)) << "length " << n;
    EXPECT_EQ(counts[n], oracle::trees_of_length(n)) << "length " << n;
  }
  EXPECT_LT(secs, 60.0);
}

TEST(Enumerate, KnownSmallCounts) {
  EXPECT_EQ(oracle::trees_of_length(1), 2u);
  EXPECT_EQ(oracle::trees_of_length(2), 2u);
  EXPECT_EQ(oracle::trees_of_length(3), 22u);
}

TEST(Enumerate, ParametersNumberedLeftToRight) {
  enumerate_trees(5, [&](const Expr& e) { ASSERT_TRUE(e.params_contiguous()) << render(e); });
}

TEST(Catalog, SmallLengths) {
  EnumerationStats st;
  const Catalog c = build_catalog(4, {}, &st);
  // length 1: x, p1; length 2: 1/x (1/p1 folds to p1)
  EXPECT_EQ(st.unique[1], 2u);
  EXPECT_EQ(st.unique[2], 1u);
  ASSERT_GE(c.size(), 3u);
  EXPECT_EQ(render(c.entries()[0].expr), "x");
  EXPECT_EQ(render(c.entries()[1].expr), "p1");
  for (const auto& e : c.entries()) {
    EXPECT_LE(e.length, 4u);
    EXPECT_EQ(c.lookup(e.hash), &e);
  }
}

TEST(Catalog, Deterministic) {
  const Catalog a = build_catalog(5, {});
  CatalogOptions opt;
  opt.workers = 3;
  const Catalog b = build_catalog(5, opt);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.entries()[i].hash, b.entries()[i].hash);
    EXPECT_EQ(a.entries()[i].expr, b.entries()[i].expr);
  }
}

TEST(Catalog, SaveLoadAndCorruption) {
  const Catalog a = build_catalog(5, {});
  const auto dir = std::filesystem::temp_directory_path() / "esrlab_catalog_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "c5.tsv";
  save_catalog(a, path);
  const Catalog b = load_catalog(path);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(b.max_len, 5);
  EXPECT_EQ(b.rules_id, a.rules_id);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.entries()[i].expr, b.entries()[i].expr);

  // flip one character in an entry line
  std::string text;
  {
    std::ifstream in(path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto pos = text.find("\tx\n");
  ASSERT_NE(pos, std::string::npos);
  std::string bad = text;
  bad[pos + 1] = 'p';
  bad.insert(pos + 2, "1");
  {
    std::ofstream out(path);
    out << bad;
  }
  EXPECT_THROW(load_catalog(path), DataError);
  // truncated
  {
    std::ofstream out(path);
    out << text.substr(0, text.size() / 2);
  }
  EXPECT_THROW(load_catalog(path), DataError);
  EXPECT_THROW(load_catalog(dir / "missing.tsv"), IoError);
  std::filesystem::remove_all(dir);
}
