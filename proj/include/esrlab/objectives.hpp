#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "esrlab/dataset.hpp"
#include "esrlab/expr.hpp"

namespace esr {

enum class ObjectiveKind { Mse, Mnr };

std::string_view objective_name(ObjectiveKind k);
/// Accepts "mse" or "mnr"; throws ConfigError otherwise.
ObjectiveKind parse_objective(std::string_view name);

/// Mean squared error; non-finite if any residual is.
double mse(const Expr& e, std::span<const double> theta, const Dataset& data);

struct MnrParams {
  std::vector<double> theta;
  double mu = 0.0;
  double omega = 1.0;
  double sigma_int = 0.0;
};

/// Log-likelihood of data with errors in both variables under a Gaussian
/// hyperprior N(mu, omega^2) on the true x, with the model linearized at each
/// x_i, and additive constants dropped. Requires sigma columns.
double mnr_loglik(const Expr& e, const MnrParams& p, const Dataset& data);

/// Minimization view used by the optimizer. The search vector is theta for
/// MSE and theta followed by (mu, log omega, log sigma_int) for MNR, where the
/// minimized value is the negative log-likelihood.
class Objective {
 public:
  Objective(const Expr& e, const Dataset& data, ObjectiveKind kind);

  ObjectiveKind kind() const { return kind_; }
  std::size_t params() const { return params_; }
  std::size_t dim() const { return params_ + (kind_ == ObjectiveKind::Mnr ? 3 : 0); }

  double value(std::span<const double> z) const;
  /// Value and gradient; g must have dim() entries.
  double value_grad(std::span<const double> z, std::span<double> g) const;

  /// Data-derived starting values for the MNR hyperparameters.
  std::vector<double> hyper_start() const;

  static MnrParams unpack(std::span<const double> z, std::size_t params);

 private:
  double mnr(std::span<const double> z, std::span<double> g) const;

  const Expr& expr_;
  const Dataset& data_;
  ObjectiveKind kind_;
  std::size_t params_;
};

}  // namespace esr
