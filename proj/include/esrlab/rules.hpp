#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "esrlab/egraph.hpp"
#include "esrlab/expr.hpp"

namespace esr {

/// Side condition on one pattern variable, decided from the class analysis.
enum class Guard : std::uint8_t {
  None,
  NonZero,    // not provably the literal 0
  Positive,   // a literal > 0
  NonNeg,     // provably >= 0
  Integer,    // an integer literal
  ParamOnly,  // built from parameters and literals, not itself a literal
};

/// Rewrite lhs -> rhs. Patterns are expressions whose variables x1..x4 stand
/// for the pattern variables a..d; literals match classes folded to that value.
struct Condition {
  Guard guard = Guard::None;
  std::uint32_t var = 0;
};

struct RewriteRule {
  std::string name;
  Expr lhs;
  Expr rhs;
  std::vector<Condition> conditions;
};

/// The built-in rule set. Bidirectional rules appear once per direction.
const std::vector<RewriteRule>& default_rules();

/// Identifier recorded in catalog headers; changes whenever the rule set does.
std::string rule_set_id();

bool guard_holds(Guard g, const ClassData& d);

/// "lhs -> rhs | guard" with pattern variables named a, b, c, d.
std::string describe(const RewriteRule& rule);

std::string_view guard_name(Guard g);

}  // namespace esr
