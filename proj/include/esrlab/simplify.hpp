#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "esrlab/egraph.hpp"
#include "esrlab/expr.hpp"
#include "esrlab/rules.hpp"

namespace esr {

struct EqsatConfig {
  int max_iters = 30;
  std::size_t node_budget = 100000;
};

enum class StopReason : std::uint8_t { Saturated, IterationLimit, NodeBudget };

std::string_view stop_reason_name(StopReason r);

struct SaturationReport {
  int iterations = 0;
  StopReason reason = StopReason::Saturated;
  std::size_t nodes = 0;
  std::size_t classes = 0;
};

struct CanonicalForm {
  Expr expression;
  std::uint64_t hash = 0;
  std::size_t params = 0;
  std::size_t nodes = 0;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

SaturationReport saturate(EGraph& g, const std::vector<RewriteRule>& rules, const EqsatConfig& cfg);

/// Cheapest member tree of `root`: fewest distinct parameters, then fewest
/// nodes, then the first under the recursive node order. Parameter labels
/// and hole labels are ignored by the order; parameters are renumbered
/// left to right in the result. Throws ExtractionError if no finite tree exists.
Expr extract(const EGraph& g, ClassId root);

CanonicalForm canonicalize(const Expr& e, const EqsatConfig& cfg = {});
CanonicalForm canonicalize(const Expr& e, const EqsatConfig& cfg, SaturationReport* report);

/// True when the canonical form is a single parameter or literal.
bool simplifies_to_constant(const Expr& e, const EqsatConfig& cfg = {});

/// Holes (variables at kHoleVarBase and above) renamed in order of first
/// appearance, and parameters renumbered.
Expr normalize_labels(const Expr& e);

}  // namespace esr
