#include "esrlab/rules.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "esrlab/hash.hpp"

namespace esr {

namespace {

std::vector<RewriteRule> build_rules() {
  const Expr a = x(0), b = x(1), c = x(2), d = x(3);
  const Expr zero = lit(0.0), one = lit(1.0), two = lit(2.0), m1 = lit(-1.0);
  std::vector<RewriteRule> r;
  auto add = [&](std::string name, Expr lhs, Expr rhs, std::vector<Condition> cond = {}) {
    r.push_back({std::move(name), std::move(lhs), std::move(rhs), std::move(cond)});
  };
  using G = Guard;

  add("add-comm", a + b, b + a);
  add("mul-comm", a * b, b * a);
  add("add-assoc", (a + b) + c, a + (b + c));
  add("add-assoc-rev", a + (b + c), (a + b) + c);
  add("mul-assoc", (a * b) * c, a * (b * c));
  add("mul-assoc-rev", a * (b * c), (a * b) * c);

  add("add-zero", zero + a, a);
  add("mul-zero", zero * a, zero);
  add("div-zero", zero / a, zero, {{G::NonZero, 0}});
  add("mul-one", one * a, a);
  add("sub-self", a - a, zero);
  add("add-self", a + a, two * a);
  add("div-self", a / a, one, {{G::NonZero, 0}});

  add("pow-base-one", powabs(one, a), one);
  add("pow-exp-one", powabs(a, one), abs(a));
  add("pow-exp-zero", powabs(a, zero), one);
  add("pow-base-zero", powabs(zero, a), zero, {{G::Positive, 0}});

  add("div-to-inv", a / b, a * inv(b));
  add("inv-to-div", inv(a) * b, b / a);
  add("inv-inv", inv(inv(a)), a);
  add("neg-neg", neg(neg(a)), a);
  add("neg-to-mul", neg(a), m1 * a);
  add("mul-to-neg", m1 * a, neg(a));
  add("sub-to-add", a - b, a + m1 * b);
  add("add-to-sub", a + m1 * b, a - b);

  add("abs-nonneg", abs(a), a, {{G::NonNeg, 0}});
  add("abs-neg", abs(m1 * a), abs(a));
  add("abs-sub-swap", abs(a - b), abs(b - a));

  add("factor-one", a + b * a, (one + b) * a);
  add("factor", b * a + c * a, a * (b + c));
  add("distribute", a * (b + c), b * a + c * a);

  add("pow-mul", powabs(a, b) * powabs(a, c), powabs(a, b + c));
  // The base is taken in absolute value, so these need no integer guard.
  add("pow-pow", powabs(powabs(a, b), c), powabs(a, b * c));
  add("pow-split", powabs(a * b, c), powabs(a, c) * powabs(b, c));
  add("pow-join", powabs(a, c) * powabs(b, c), powabs(a * b, c));
  add("square", a * a, powabs(a, two));
  add("pow-mul-base", powabs(a, b) * a, powabs(a, one + b), {{G::NonNeg, 0}});
  add("pow-mul-abs", powabs(a, b) * abs(a), powabs(a, one + b));
  add("inv-split", inv(a * b), inv(a) * inv(b));
  add("inv-join", inv(a) * inv(b), inv(a * b));
  add("inv-pow", inv(powabs(a, b)), powabs(a, m1 * b));
  add("pow-neg-exp", powabs(a, m1 * b), inv(powabs(a, b)));
  add("pow-inv-base", powabs(inv(a), b), powabs(a, m1 * b));
  add("pow-abs-base", powabs(abs(a), b), powabs(a, b));
  add("pow-neg-base", powabs(m1 * a, b), powabs(a, b));
  return r;
}

}  // namespace

const std::vector<RewriteRule>& default_rules() {
  static const std::vector<RewriteRule> rules = build_rules();
  return rules;
}

std::string_view guard_name(Guard g) {
  switch (g) {
    case Guard::None: return "";
    case Guard::NonZero: return "!= 0";
    case Guard::Positive: return "> 0";
    case Guard::NonNeg: return ">= 0";
    case Guard::Integer: return "is_integer";
    case Guard::ParamOnly: return "param_only";
  }
  return "";
}

bool guard_holds(Guard g, const ClassData& d) {
  switch (g) {
    case Guard::None: return true;
    case Guard::NonZero: return !d.is_constant(0.0);
    case Guard::Positive: return d.is_constant() && d.value > 0.0;
    case Guard::NonNeg: return d.nonneg;
    case Guard::Integer: return d.is_constant() && d.value == std::trunc(d.value);
    case Guard::ParamOnly:
      return d.param_only();
  }
  return false;
}

std::string describe(const RewriteRule& rule) {
  static const std::array<std::string, 4> names{"a", "b", "c", "d"};
  std::string out = render(rule.lhs, names) + " -> " + render(rule.rhs, names);
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    out += i == 0 ? " | " : ", ";
    out += names[rule.conditions[i].var];
    out += ' ';
    out += guard_name(rule.conditions[i].guard);
  }
  return out;
}

std::string rule_set_id() {
  std::uint64_t h = 0;
  for (const auto& r : default_rules()) h = hash_combine(h, hash_string(describe(r)));
  char buf[24];
  std::snprintf(buf, sizeof buf, "rules-%08x", static_cast<unsigned>(h & 0xffffffffu));
  return buf;
}

}  // namespace esr
