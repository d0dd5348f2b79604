#pragma once
// Reference implementations used only by tests. Each one is written without
// the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <quadmath.h>

#include "esrlab/expr.hpp"
#include "esrlab/rng.hpp"
#include "esrlab/rules.hpp"

namespace oracle {

// Derivations of length n under x | p | inv(E) | powabs(E,E) | E+E | E-E | E*E | E/E,
// by splitting the remaining nodes over the children of each alternative.
inline std::uint64_t trees_of_length(int n) {
  static std::map<int, std::uint64_t> memo;
  if (n <= 0) return 0;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  struct Alt {
    int arity;
  };
  static const Alt alts[] = {{0}, {0}, {1}, {2}, {2}, {2}, {2}, {2}};
  std::uint64_t total = 0;
  for (const Alt& a : alts) {
    const int rest = n - 1;
    if (a.arity == 0) {
      total += rest == 0 ? 1 : 0;
    } else if (a.arity == 1) {
      total += trees_of_length(rest);
    } else {
      for (int left = 1; left < rest; ++left) total += trees_of_length(left) * trees_of_length(rest - left);
    }
  }
  memo[n] = total;
  return total;
}

struct Derivative {
  double value;
  double error;  // estimated
};

// Ridders' extrapolation of central differences.
inline Derivative ridders(const std::function<double(double)>& f, double x, double h) {
  constexpr int kTab = 10;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon, kSafe = 2.0;
  double a[kTab][kTab];
  a[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
  Derivative best{a[0][0], std::numeric_limits<double>::infinity()};
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    a[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double err = std::max(std::fabs(a[j][i] - a[j - 1][i]), std::fabs(a[j][i] - a[j - 1][i - 1]));
      if (err <= best.error) best = {a[j][i], err};
    }
    if (std::fabs(a[i][i] - a[i - 1][i - 1]) >= kSafe * best.error) break;
  }
  return best;
}

// log of the integral over the true abscissa t of
//   N(y | f + A (t - x), sy^2 + sint^2) N(x | t, sx^2) N(t | mu, omega^2)
// by adaptive Gauss-Kronrod on a window around the integrand's peak.
inline double mnr_point_loglik(double f, double A, double x, double y, double sx, double sy, double mu, double omega,
                               double sint) {
  const double s2 = sy * sy + sint * sint;
  const double log2pi = std::log(2.0 * M_PI);
  auto log_integrand = [&](double t) {
    const double r = y - f - A * (t - x);
    return -0.5 * (r * r / s2 + log2pi + std::log(s2)) - 0.5 * ((x - t) * (x - t) / (sx * sx) + log2pi + 2 * std::log(sx)) -
           0.5 * ((t - mu) * (t - mu) / (omega * omega) + log2pi + 2 * std::log(omega));
  };
  // Peak and width from the curvature; the integral itself is numeric.
  const double prec = A * A / s2 + 1.0 / (sx * sx) + 1.0 / (omega * omega);
  const double mean = (A * (y - f + A * x) / s2 + x / (sx * sx) + mu / (omega * omega)) / prec;
  const double sd = 1.0 / std::sqrt(prec);
  const double peak = log_integrand(mean);
  auto g = [&](double t) { return std::exp(log_integrand(t) - peak); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, mean - 40.0 * sd, mean + 40.0 * sd,
                                                                               20, 1e-13, &err);
  return peak + std::log(v);
}

using Quad = __float128;

// Recursive evaluation in quad precision, independent of the library evaluator.
inline Quad eval_quad(const esr::Expr& e, std::size_t pos, const std::vector<Quad>& theta, Quad x) {
  const esr::Node& n = e[pos];
  const Quad nan = nanq("");
  // An overflowed intermediate poisons the result, even where the
  // arithmetic would turn it back into a number (1 / inf).
  auto kid = [&](int k) {
    std::size_t c = pos + 1;
    for (int i = 0; i < k; ++i) c = e.subtree_end(c);
    const Quad v = eval_quad(e, c, theta, x);
    return finiteq(v) ? v : nan;
  };
  switch (n.op) {
    case esr::Op::Var: return n.index == 0 ? x : nan;
    case esr::Op::Param: return n.index >= 1 && n.index <= theta.size() ? theta[n.index - 1] : nan;
    case esr::Op::Const: return n.value;
    case esr::Op::Inv: {
      const Quad a = kid(0);
      return a == 0 ? nan : 1 / a;
    }
    case esr::Op::Neg: return -kid(0);
    case esr::Op::Abs: return fabsq(kid(0));
    case esr::Op::Add: return kid(0) + kid(1);
    case esr::Op::Sub: return kid(0) - kid(1);
    case esr::Op::Mul: return kid(0) * kid(1);
    case esr::Op::Div: {
      const Quad b = kid(1);
      return b == 0 ? nan : kid(0) / b;
    }
    case esr::Op::PowAbs: {
      const Quad a = fabsq(kid(0)), b = kid(1);
      if (a == 0) return b > 0 ? 0 : b == 0 ? 1 : nan;
      return expq(b * logq(a));
    }
  }
  return nan;
}

struct QuadDerivative {
  bool resolved = false;   // two step sizes agree
  bool in_range = false;   // value and derivative are normal doubles (or zero)
  double value = 0.0;
};

// d/d(slot) of e at (theta, x); slot == theta.size() means x. Central
// differences in quad precision at two steps. Unresolved when they disagree
// (a kink or pole within the step), when the step is absorbed by the value,
// or when anything is undefined.
inline QuadDerivative derivative_quad(const esr::Expr& e, const std::vector<double>& theta, double x,
                                      std::size_t slot) {
  const std::vector<Quad> th(theta.begin(), theta.end());
  const Quad at = slot < theta.size() ? th[slot] : Quad(x);
  auto f = [&](Quad v) {
    std::vector<Quad> t = th;
    Quad xx = x;
    (slot < theta.size() ? t[slot] : xx) = v;
    return eval_quad(e, 0, t, xx);
  };
  auto central = [&](Quad h) { return (f(at + h) - f(at - h)) / (2 * h); };
  const Quad scale = fabsq(at) > 1 ? fabsq(at) : Quad(1);
  const Quad f0 = f(at), d1 = central(scale * 1e-9), d2 = central(scale * 1e-10);
  QuadDerivative out;
  if (!finiteq(f0) || !finiteq(d1) || !finiteq(d2)) return out;
  const Quad big = fabsq(d1) > fabsq(d2) ? fabsq(d1) : fabsq(d2);
  // The change across the smaller step must stand well above quad rounding
  // of the value itself, or the difference measures nothing.
  const Quad change = fabsq(d2) * 2 * scale * 1e-10;
  out.resolved = fabsq(d1 - d2) <= 1e-12 * big && change > 1e-22 * fabsq(f0);
  auto normal = [](Quad v) {
    const Quad a = fabsq(v);
    return a == 0 || (a >= std::numeric_limits<double>::min() && a <= std::numeric_limits<double>::max());
  };
  out.in_range = normal(f0) && normal(d2);
  out.value = static_cast<double>(d2);
  return out;
}

// Rule pattern variables a..d replaced by literal values.
inline esr::Expr substitute(const esr::Expr& e, const double (&v)[4]) {
  std::vector<esr::Node> nodes(e.nodes().begin(), e.nodes().end());
  for (esr::Node& n : nodes) {
    if (n.op == esr::Op::Var) n = esr::Node{esr::Op::Const, 0, v[n.index]};
  }
  return esr::Expr::from_preorder(std::move(nodes));
}

inline double draw_guarded(esr::Rng& rng, esr::Guard g) {
  for (;;) {
    // Multiples of 1/8: sums and products stay exact, so only inv, div and
    // pow round.
    const double v = static_cast<double>(static_cast<int>(rng.below(49)) - 24) / 8.0;
    switch (g) {
      case esr::Guard::NonZero: if (v != 0.0) return v; break;
      case esr::Guard::Positive: if (v > 0.0) return v; break;
      case esr::Guard::NonNeg: if (v >= 0.0) return v; break;
      case esr::Guard::Integer: if (v == std::trunc(v)) return v; break;
      default: return v;
    }
  }
}

}  // namespace oracle
