#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "esrlab/dataset.hpp"
#include "esrlab/enumerate.hpp"
#include "esrlab/error.hpp"
#include "esrlab/fit.hpp"
#include "esrlab/lbfgs.hpp"
#include "esrlab/rng.hpp"

using namespace esr;

namespace {

Dataset linear(double a, double b, std::size_t n) {
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 0.5 + 0.1 * static_cast<double>(i);
    d.x.push_back(x);
    d.y.push_back(a * x + b);
  }
  return d;
}

Dataset bumpy(std::size_t n) {
  Dataset d;
  Rng rng(3);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 0.2 + 0.05 * static_cast<double>(i);
    d.x.push_back(x);
    d.y.push_back(std::sin(2 * x) + 0.05 * rng.normal());
  }
  return d;
}

}  // namespace

TEST(Lbfgs, Rosenbrock) {
  std::vector<double> x{-1.2, 1.0};
  const auto f = [](std::span<const double> z, std::span<double> g) {
    const double a = 1.0 - z[0], b = z[1] - z[0] * z[0];
    g[0] = -2.0 * a - 400.0 * z[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  LbfgsOptions opt;
  opt.rel_tol = opt.abs_tol = 1e-14;
  const LbfgsResult r = lbfgs_minimize(f, x, opt);
  EXPECT_NEAR(x[0], 1.0, 1e-6);
  EXPECT_NEAR(x[1], 1.0, 1e-6);
  EXPECT_EQ(r.status, LbfgsStatus::Converged);
}

TEST(Fit, ConstantClosedForm) {
  const Dataset d = bumpy(40);
  double mean = 0.0, var = 0.0;
  for (double y : d.y) mean += y;
  mean /= static_cast<double>(d.size());
  for (double y : d.y) var += (y - mean) * (y - mean);
  var /= static_cast<double>(d.size());
  const FitResult r = fit(parse("p1"), d, ObjectiveKind::Mse, FitConfig::esr(), 1);
  ASSERT_EQ(r.theta.size(), 1u);
  EXPECT_NEAR(r.theta[0], mean, 1e-8);
  EXPECT_NEAR(r.objective, var, 1e-12);
}

TEST(Fit, LinearExact) {
  const Dataset d = linear(1.7, -0.3, 30);
  FitConfig one = FitConfig::esr();
  one.restarts = 1;
  const FitResult r = fit(parse("p1 * x + p2"), d, ObjectiveKind::Mse, one, 11);
  EXPECT_NEAR(r.theta[0], 1.7, 1e-8);
  EXPECT_NEAR(r.theta[1], -0.3, 1e-8);
  EXPECT_LT(r.objective, 1e-14);
}

TEST(Fit, ZeroParameters) {
  const Dataset d = linear(1.0, 0.0, 10);
  const FitResult r = fit(parse("x * x"), d, ObjectiveKind::Mse, FitConfig::esr(), 1);
  EXPECT_EQ(r.evaluations, 1);
  EXPECT_EQ(r.gradient_evaluations, 0);
  EXPECT_TRUE(r.theta.empty());
  double want = 0.0;
  for (double x : d.x) want += (x * x - x) * (x * x - x);
  EXPECT_NEAR(r.objective, want / 10.0, 1e-14);
}

TEST(Fit, DeterministicAndMonotone) {
  const Dataset d = bumpy(50);
  const Expr e = parse("p1 / (1.0 / (p2 + x) - p3 ^ x)");
  const FitResult a = fit(e, d, ObjectiveKind::Mse, FitConfig::esr(), 42);
  const FitResult b = fit(e, d, ObjectiveKind::Mse, FitConfig::esr(), 42);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.evaluations, b.evaluations);
  double prev = std::numeric_limits<double>::infinity();
  for (int restarts : {1, 2, 5, 20}) {
    FitConfig c = FitConfig::esr();
    c.restarts = restarts;
    c.patience = 0;
    const FitResult r = fit(e, d, ObjectiveKind::Mse, c, 42);
    EXPECT_LE(r.objective, prev);
    EXPECT_EQ(r.restarts_used, restarts);
    EXPECT_EQ(static_cast<int>(r.reasons.size()), restarts);
    prev = r.objective;
  }
}

TEST(Fit, Degenerate) {
  const Dataset d = linear(1.0, 0.0, 5);
  const FitResult r = fit(parse("x - x + 1.0 / (x - x) * p1"), d, ObjectiveKind::Mse, FitConfig::gp(), 1);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(std::isfinite(r.objective));
}

TEST(Fit, GpPreset) {
  const FitConfig c = FitConfig::gp();
  EXPECT_EQ(c.restarts, 1);
  EXPECT_EQ(c.max_iters, 10);
  EXPECT_EQ(c.init_lo, -3.0);
  EXPECT_EQ(c.init_hi, 3.0);
}

TEST(Fit, MnrJoint) {
  Dataset d = linear(0.8, 0.2, 25);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.sigma_x.push_back(0.05);
    d.sigma_y.push_back(0.05);
  }
  FitConfig c = FitConfig::esr();
  c.restarts = 5;
  const FitResult r = fit(parse("p1 * x + p2"), d, ObjectiveKind::Mnr, c, 3);
  ASSERT_EQ(r.hyper.size(), 3u);
  EXPECT_NEAR(r.theta[0], 0.8, 1e-3);
  EXPECT_NEAR(r.theta[1], 0.2, 1e-3);
  EXPECT_TRUE(std::isfinite(r.objective));
}

TEST(FitCatalog, LengthOneAndResume) {
  const Dataset d = linear(2.0, 1.0, 20);
  const Catalog c = build_catalog(1, {});
  ASSERT_EQ(c.size(), 2u);
  const auto dir = std::filesystem::temp_directory_path() / "esrlab_fit_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "r1.tsv";
  CatalogFitOptions opt;
  opt.seed = 5;
  ASSERT_TRUE(fit_catalog(c, d, opt, out));
  const auto rows = load_results(out);
  ASSERT_EQ(rows.size(), 2u);
  // x: mean of (x - 2x - 1)^2; p1: variance of y
  double mx = 0.0, vy = 0.0, my = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    mx += (d.x[i] - d.y[i]) * (d.x[i] - d.y[i]);
    my += d.y[i];
  }
  my /= 20.0;
  for (double y : d.y) vy += (y - my) * (y - my);
  EXPECT_NEAR(rows[0].objective, mx / 20.0, 1e-12);
  EXPECT_NEAR(rows[1].objective, vy / 20.0, 1e-10);

  // An interrupted run leaves a partial file that a rerun picks up.
  std::atomic<bool> stop{true};
  opt.stop = &stop;
  const auto out2 = dir / "r2.tsv";
  EXPECT_FALSE(fit_catalog(c, d, opt, out2));
  auto partial = out2;
  partial += ".partial";
  EXPECT_TRUE(std::filesystem::exists(partial));
  {
    std::ofstream f(partial, std::ios::app);
    f << format_record(rows[0]) << '\n';
  }
  opt.stop = nullptr;
  ASSERT_TRUE(fit_catalog(c, d, opt, out2));
  EXPECT_FALSE(std::filesystem::exists(partial));
  const auto rows2 = load_results(out2);
  ASSERT_EQ(rows2.size(), 2u);
  EXPECT_EQ(rows2[1].objective, rows[1].objective);
  std::filesystem::remove_all(dir);
}

TEST(FitCatalog, WorkerCountDoesNotMatter) {
  const Dataset d = bumpy(30);
  const Catalog c = build_catalog(4, {});
  const auto dir = std::filesystem::temp_directory_path() / "esrlab_fit_workers";
  std::filesystem::create_directories(dir);
  CatalogFitOptions opt;
  opt.fit.restarts = 4;
  opt.workers = 1;
  ASSERT_TRUE(fit_catalog(c, d, opt, dir / "a.tsv"));
  opt.workers = 3;
  ASSERT_TRUE(fit_catalog(c, d, opt, dir / "b.tsv"));
  std::ifstream a(dir / "a.tsv"), b(dir / "b.tsv");
  const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
  std::filesystem::remove_all(dir);
}
