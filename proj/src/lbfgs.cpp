#include "esrlab/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace esr {

std::string_view status_name(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::Converged: return "converged";
    case LbfgsStatus::MaxIterations: return "max-iterations";
    case LbfgsStatus::LineSearchFailed: return "line-search";
    case LbfgsStatus::NonFinite: return "non-finite";
    case LbfgsStatus::Timeout: return "timeout";
  }
  return "";
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Trial {
  double a = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative
};

// Minimizer of the cubic through two trials, or NaN if it does not exist.
double cubic_min(const Trial& p, const Trial& q) {
  const double d1 = p.d + q.d - 3.0 * (p.f - q.f) / (p.a - q.a);
  const double disc = d1 * d1 - p.d * q.d;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), q.a - p.a);
  return q.a - (q.a - p.a) * (q.d + d2 - d1) / (q.d - p.d + 2.0 * d2);
}

class LineSearch {
 public:
  LineSearch(const ValueGradFn& fdf, const std::vector<double>& x0, const std::vector<double>& dir,
             const LbfgsOptions& opt, long& evals)
      : fdf_(fdf), x0_(x0), dir_(dir), opt_(opt), evals_(evals), x_(x0.size()), g_(x0.size()) {}

  // Returns true with the accepted point in x(), g(), f().
  bool run(double f0, double d0, double a0) {
    f0_ = f0;
    d0_ = d0;
    Trial prev{0.0, f0, d0};
    double a = a0;
    for (int i = 0; i < opt_.max_line_search; ++i) {
      Trial t = eval(a);
      if (!std::isfinite(t.f)) {
        a = 0.5 * (prev.a + a);
        continue;
      }
      if (t.f > f0 + opt_.c1 * a * d0 || (i > 0 && t.f >= prev.f)) return zoom(prev, t);
      if (std::fabs(t.d) <= -opt_.c2 * d0) return accept(t);
      if (t.d >= 0.0) return zoom(t, prev);
      prev = t;
      a *= 2.0;
    }
    return fallback();
  }

  const std::vector<double>& x() const { return best_x_; }
  const std::vector<double>& g() const { return best_g_; }
  double f() const { return best_f_; }

 private:
  Trial eval(double a) {
    for (std::size_t k = 0; k < x_.size(); ++k) x_[k] = x0_[k] + a * dir_[k];
    const double f = fdf_(x_, g_);
    ++evals_;
    Trial t{a, f, dot(g_, dir_)};
    if (!std::isfinite(t.d)) t.f = std::numeric_limits<double>::infinity();
    // Remember the best Armijo point in case the search does not terminate.
    if (std::isfinite(t.f) && t.f < best_f_ && t.f <= f0_ + opt_.c1 * a * d0_) {
      best_f_ = t.f;
      best_x_ = x_;
      best_g_ = g_;
      best_a_ = a;
    }
    return t;
  }

  bool accept(const Trial& t) {
    if (best_a_ != t.a) {
      best_f_ = t.f;
      best_x_ = x_;
      best_g_ = g_;
      best_a_ = t.a;
    }
    return true;
  }

  bool zoom(Trial lo, Trial hi) {
    for (int i = 0; i < opt_.max_line_search; ++i) {
      const double left = std::min(lo.a, hi.a), right = std::max(lo.a, hi.a);
      const double width = right - left;
      if (width <= 1e-16 * std::max(1.0, right)) break;
      double a = std::isfinite(hi.f) ? cubic_min(lo, hi) : std::numeric_limits<double>::quiet_NaN();
      if (!std::isfinite(a) || a < left + 0.1 * width || a > right - 0.1 * width) a = 0.5 * (lo.a + hi.a);
      const Trial t = eval(a);
      if (!std::isfinite(t.f) || t.f > f0_ + opt_.c1 * a * d0_ || t.f >= lo.f) {
        hi = t;
        continue;
      }
      if (std::fabs(t.d) <= -opt_.c2 * d0_) return accept(t);
      if (t.d * (hi.a - lo.a) >= 0.0) hi = lo;
      lo = t;
    }
    return fallback();
  }

  bool fallback() const { return best_a_ > 0.0; }

  const ValueGradFn& fdf_;
  const std::vector<double>& x0_;
  const std::vector<double>& dir_;
  const LbfgsOptions& opt_;
  long& evals_;
  std::vector<double> x_, g_;
  double f0_ = 0.0, d0_ = 0.0;
  double best_f_ = std::numeric_limits<double>::infinity();
  double best_a_ = 0.0;
  std::vector<double> best_x_, best_g_;
};

}  // namespace

LbfgsResult lbfgs_minimize(const ValueGradFn& fdf, std::vector<double>& x, const LbfgsOptions& opt) {
  LbfgsResult res;
  const std::size_t n = x.size();
  std::vector<double> g(n), dir(n);
  res.f = fdf(x, g);
  res.evaluations = 1;
  if (!std::isfinite(res.f) || !std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); })) {
    res.status = LbfgsStatus::NonFinite;
    return res;
  }
  if (n == 0) return res;

  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;
  std::vector<double> alpha(static_cast<std::size_t>(opt.memory));
  const bool timed = opt.deadline != std::chrono::steady_clock::time_point{};

  for (int iter = 0; iter < opt.max_iters; ++iter) {
    if (timed && std::chrono::steady_clock::now() > opt.deadline) {
      res.status = LbfgsStatus::Timeout;
      return res;
    }
    double gnorm = std::sqrt(dot(g, g));
    if (gnorm == 0.0) {
      res.status = LbfgsStatus::Converged;
      return res;
    }
    // Two-loop recursion.
    for (std::size_t k = 0; k < n; ++k) dir[k] = -g[k];
    for (std::size_t j = S.size(); j-- > 0;) {
      alpha[j] = rho[j] * dot(S[j], dir);
      for (std::size_t k = 0; k < n; ++k) dir[k] -= alpha[j] * Y[j][k];
    }
    if (!S.empty()) {
      const double gamma = dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
      for (double& v : dir) v *= gamma;
    }
    for (std::size_t j = 0; j < S.size(); ++j) {
      const double beta = rho[j] * dot(Y[j], dir);
      for (std::size_t k = 0; k < n; ++k) dir[k] += (alpha[j] - beta) * S[j][k];
    }
    double d0 = dot(g, dir);
    if (!(d0 < 0.0)) {
      S.clear();
      Y.clear();
      rho.clear();
      for (std::size_t k = 0; k < n; ++k) dir[k] = -g[k];
      d0 = -gnorm * gnorm;
    }
    const double a0 = S.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    LineSearch ls(fdf, x, dir, opt, res.evaluations);
    if (!ls.run(res.f, d0, a0)) {
      res.status = LbfgsStatus::LineSearchFailed;
      res.iterations = iter;
      return res;
    }
    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = ls.x()[k] - x[k];
      y[k] = ls.g()[k] - g[k];
    }
    const double f_prev = res.f;
    x = ls.x();
    g = ls.g();
    res.f = ls.f();
    res.iterations = iter + 1;
    const double sy = dot(s, y);
    if (sy > 1e-300) {
      if (S.size() == static_cast<std::size_t>(opt.memory)) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      rho.push_back(1.0 / sy);
    }
    const double decrease = f_prev - res.f;
    if (decrease <= opt.abs_tol || decrease <= opt.rel_tol * std::fabs(res.f)) {
      res.status = LbfgsStatus::Converged;
      return res;
    }
  }
  res.status = LbfgsStatus::MaxIterations;
  return res;
}

}  // namespace esr
