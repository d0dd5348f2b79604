#pragma once

#include <chrono>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace esr {

struct LbfgsOptions {
  int max_iters = 1000;
  int memory = 8;
  /// Stop when the decrease in f over one iteration is below abs_tol or
  /// below rel_tol * |f|.
  double rel_tol = 1e-8;
  double abs_tol = 1e-8;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 40;
  /// No deadline when zero.
  std::chrono::steady_clock::time_point deadline{};
};

enum class LbfgsStatus { Converged, MaxIterations, LineSearchFailed, NonFinite, Timeout };

std::string_view status_name(LbfgsStatus s);

struct LbfgsResult {
  double f = 0.0;
  int iterations = 0;
  long evaluations = 0;  // each evaluation computes value and gradient
  LbfgsStatus status = LbfgsStatus::Converged;
};

/// fdf(x, g) returns f(x) and writes the gradient into g.
using ValueGradFn = std::function<double(std::span<const double>, std::span<double>)>;

/// Minimizes in place starting from x.
LbfgsResult lbfgs_minimize(const ValueGradFn& fdf, std::vector<double>& x, const LbfgsOptions& opt);

}  // namespace esr
