#include "esrlab/eval.hpp"

#include "esrlab/error.hpp"

namespace esr {

double eval(const Expr& e, std::span<const double> theta, double x) {
  thread_local std::vector<double> stack;
  return eval_generic<double>(e, theta, x, stack);
}

std::size_t param_slots(const Expr& e) { return e.max_param_index(); }

ValueGrad eval_with_grad(const Expr& e, std::span<const double> theta, double x, bool wrt_x) {
  using D = Dual<double>;
  const int lanes = static_cast<int>(theta.size()) + (wrt_x ? 1 : 0);
  if (lanes > kMaxLanes) throw Error("too many parameters for forward-mode evaluation");
  std::vector<D> th(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) th[k] = D::variable(theta[k], static_cast<int>(k), lanes);
  D dx = wrt_x ? D::variable(x, lanes - 1, lanes) : D(x);
  dx.n = lanes;
  thread_local std::vector<D> stack;
  const D r = eval_generic<D>(e, th, dx, stack);
  ValueGrad out;
  out.value = r.v;
  out.grad.assign(r.d.begin(), r.d.begin() + lanes);
  return out;
}

}  // namespace esr
