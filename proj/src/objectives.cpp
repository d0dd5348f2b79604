#include "esrlab/objectives.hpp"

#include <cmath>
#include <numeric>

#include "esrlab/error.hpp"
#include "esrlab/eval.hpp"

namespace esr {

std::string_view objective_name(ObjectiveKind k) { return k == ObjectiveKind::Mse ? "mse" : "mnr"; }

ObjectiveKind parse_objective(std::string_view name) {
  if (name == "mse") return ObjectiveKind::Mse;
  if (name == "mnr") return ObjectiveKind::Mnr;
  throw ConfigError("unknown objective '" + std::string(name) + "' (expected mse or mnr)");
}

double mse(const Expr& e, std::span<const double> theta, const Dataset& data) {
  thread_local std::vector<double> stack;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = eval_generic<double>(e, theta, data.x[i], stack) - data.y[i];
    sum += r * r;
  }
  return sum / static_cast<double>(data.size());
}

namespace {

struct PointTerms {
  double value;  // per-point log-likelihood contribution
  // partial derivatives with respect to f, A, mu, omega^2, s^2
  double df, dA, dmu, dW, ds2;
};

// One point of the linearized errors-in-variables likelihood. With
// u = x - mu, r1 = f - y, r2 = f + A (mu - x) - y and s2 = sigma_y^2 + sigma_int^2:
//   D = A^2 W sx2 + s2 (W + sx2),  N = W r1^2 + sx2 r2^2 + s2 u^2,
//   term = -N / (2 D) - log(D) / 2.
PointTerms point_terms(double f, double A, double x, double y, double sx, double sy, double mu, double W,
                       double sint2) {
  const double sx2 = sx * sx;
  const double s2 = sy * sy + sint2;
  const double u = x - mu;
  const double r1 = f - y;
  const double r2 = f - A * u - y;
  const double D = A * A * W * sx2 + s2 * (W + sx2);
  const double N = W * r1 * r1 + sx2 * r2 * r2 + s2 * u * u;
  PointTerms t{};
  t.value = -0.5 * N / D - 0.5 * std::log(D);
  auto grad = [&](double dN, double dD) { return -0.5 * (dN * D - N * dD) / (D * D) - 0.5 * dD / D; };
  t.df = grad(2.0 * W * r1 + 2.0 * sx2 * r2, 0.0);
  t.dA = grad(-2.0 * sx2 * r2 * u, 2.0 * A * W * sx2);
  t.dmu = grad(2.0 * sx2 * r2 * A - 2.0 * s2 * u, 0.0);
  t.dW = grad(r1 * r1, A * A * sx2 + s2);
  t.ds2 = grad(u * u, W + sx2);
  return t;
}

}  // namespace

double mnr_loglik(const Expr& e, const MnrParams& p, const Dataset& data) {
  if (!data.has_sigma()) throw DataError("MNR objective requires sigma_x and sigma_y columns");
  using D = Dual<double>;
  std::vector<D> th(p.theta.begin(), p.theta.end());
  for (auto& t : th) t.n = 1;
  thread_local std::vector<D> stack;
  const double W = p.omega * p.omega;
  const double sint2 = p.sigma_int * p.sigma_int;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const D r = eval_generic<D>(e, th, D::variable(data.x[i], 0, 1), stack);
    sum += point_terms(r.v, r.d[0], data.x[i], data.y[i], data.sigma_x[i], data.sigma_y[i], p.mu, W, sint2).value;
  }
  return sum;
}

Objective::Objective(const Expr& e, const Dataset& data, ObjectiveKind kind)
    : expr_(e), data_(data), kind_(kind), params_(e.max_param_index()) {
  if (kind == ObjectiveKind::Mnr && !data.has_sigma()) {
    throw DataError("MNR objective requires sigma_x and sigma_y columns");
  }
  if (params_ > static_cast<std::size_t>(kMaxLanes)) throw Error("too many parameters");
}

MnrParams Objective::unpack(std::span<const double> z, std::size_t params) {
  MnrParams p;
  p.theta.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(params));
  p.mu = z[params];
  p.omega = std::exp(z[params + 1]);
  p.sigma_int = std::exp(z[params + 2]);
  return p;
}

std::vector<double> Objective::hyper_start() const {
  const double n = static_cast<double>(data_.size());
  const double mx = std::accumulate(data_.x.begin(), data_.x.end(), 0.0) / n;
  const double my = std::accumulate(data_.y.begin(), data_.y.end(), 0.0) / n;
  double vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    vx += (data_.x[i] - mx) * (data_.x[i] - mx);
    vy += (data_.y[i] - my) * (data_.y[i] - my);
  }
  const double sdx = std::sqrt(vx / n), sdy = std::sqrt(vy / n);
  return {mx, std::log(sdx > 0.0 ? sdx : 1.0), std::log(sdy > 0.0 ? 0.1 * sdy : 1e-3)};
}

double Objective::value(std::span<const double> z) const {
  if (kind_ == ObjectiveKind::Mse) return mse(expr_, z.first(params_), data_);
  const MnrParams p = unpack(z, params_);
  return -mnr_loglik(expr_, p, data_);
}

double Objective::value_grad(std::span<const double> z, std::span<double> g) const {
  if (kind_ == ObjectiveKind::Mnr) return mnr(z, g);
  using D = Dual<double>;
  const int P = static_cast<int>(params_);
  std::vector<D> th(params_);
  for (int k = 0; k < P; ++k) th[k] = D::variable(z[k], k, P);
  thread_local std::vector<D> stack;
  double sum = 0.0;
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const D r = eval_generic<D>(expr_, th, D(data_.x[i]), stack);
    const double res = r.v - data_.y[i];
    sum += res * res;
    for (int k = 0; k < P && k < r.n; ++k) g[k] += 2.0 * res * r.d[k];
  }
  const double n = static_cast<double>(data_.size());
  for (int k = 0; k < P; ++k) g[k] /= n;
  return sum / n;
}

double Objective::mnr(std::span<const double> z, std::span<double> g) const {
  // Outer lane: d/dx (gives A_i); inner lanes: d/dtheta.
  using I = Dual<double>;
  using O = Dual<I>;
  const int P = static_cast<int>(params_);
  std::vector<O> th(params_);
  for (int k = 0; k < P; ++k) {
    th[k] = O(I::variable(z[k], k, P));
    th[k].n = 1;
  }
  const MnrParams p = unpack(z, params_);
  const double W = p.omega * p.omega;
  const double sint2 = p.sigma_int * p.sigma_int;
  thread_local std::vector<O> stack;
  std::fill(g.begin(), g.end(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    O xv(I(data_.x[i]));
    xv.n = 1;
    xv.d[0] = I(1.0);
    const O r = eval_generic<O>(expr_, th, xv, stack);
    const I& f = r.v;
    const I A = r.n > 0 ? r.d[0] : I(0.0);
    const PointTerms t =
        point_terms(f.v, A.v, data_.x[i], data_.y[i], data_.sigma_x[i], data_.sigma_y[i], p.mu, W, sint2);
    sum += t.value;
    for (int k = 0; k < P; ++k) {
      const double dfk = k < f.n ? f.d[k] : 0.0;
      const double dAk = k < A.n ? A.d[k] : 0.0;
      g[k] -= t.df * dfk + t.dA * dAk;
    }
    g[params_] -= t.dmu;
    g[params_ + 1] -= t.dW * 2.0 * W;
    g[params_ + 2] -= t.ds2 * 2.0 * sint2;
  }
  return -sum;
}

}  // namespace esr
