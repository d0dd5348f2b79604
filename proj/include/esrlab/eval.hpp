#pragma once

#include <limits>
#include <span>
#include <vector>

#include "esrlab/dual.hpp"
#include "esrlab/expr.hpp"

namespace esr {

/// Evaluates e at x with parameters theta (theta[k - 1] is pk). Works for
/// double and any Dual nesting; `stack` is scratch space reused across calls.
/// Non-finite results propagate. Variables other than x evaluate to NaN.
template <typename S>
S eval_generic(const Expr& e, std::span<const S> theta, const S& x, std::vector<S>& stack) {
  stack.clear();
  const auto nodes = e.nodes();
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const Node& n = nodes[i];
    switch (n.op) {
      case Op::Var:
        stack.push_back(n.index == 0 ? x : S(std::numeric_limits<double>::quiet_NaN()));
        break;
      case Op::Param:
        stack.push_back(n.index >= 1 && n.index <= theta.size() ? theta[n.index - 1]
                                                                 : S(std::numeric_limits<double>::quiet_NaN()));
        break;
      case Op::Const:
        stack.push_back(S(n.value));
        break;
      case Op::Inv:
        stack.back() = S(1.0) / stack.back();
        break;
      case Op::Neg:
        stack.back() = -stack.back();
        break;
      case Op::Abs:
        stack.back() = absval(stack.back());
        break;
      default: {
        // Reverse preorder leaves the left operand on top.
        S a = std::move(stack.back());
        stack.pop_back();
        S& b = stack.back();
        switch (n.op) {
          case Op::Add: b = a + b; break;
          case Op::Sub: b = a - b; break;
          case Op::Mul: b = a * b; break;
          case Op::Div: b = a / b; break;
          case Op::PowAbs: b = powabs(a, b); break;
          default: break;
        }
      }
    }
  }
  return stack.back();
}

double eval(const Expr& e, std::span<const double> theta, double x);

struct ValueGrad {
  double value = 0.0;
  /// d/dtheta_k for each parameter, followed by d/dx when requested.
  std::vector<double> grad;
};

ValueGrad eval_with_grad(const Expr& e, std::span<const double> theta, double x, bool wrt_x);

/// Number of parameter slots an expression needs (its largest parameter index).
std::size_t param_slots(const Expr& e);

}  // namespace esr
