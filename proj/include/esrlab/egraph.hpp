#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "esrlab/expr.hpp"

namespace esr {

/// Variables with an index at or above this value are opaque placeholders
/// (derivation holes). They behave like variables but compare equal to each
/// other during extraction, like parameters do.
inline constexpr std::uint32_t kHoleVarBase = 1u << 20;

using ClassId = std::uint32_t;
using NodeId = std::uint32_t;

struct ENode {
  Op op = Op::Var;
  ClassId a = 0;
  ClassId b = 0;
  /// Var/Param index, or canonical bit pattern of a Const value.
  std::uint64_t payload = 0;

  friend bool operator==(const ENode&, const ENode&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const ENode& n) {
    return H::combine(std::move(h), static_cast<std::uint8_t>(n.op), n.a, n.b, n.payload);
  }
};

/// Per-class analysis value. Kinds are ordered by information content; the
/// join of two values keeps the more informative one.
struct ClassData {
  enum class Kind : std::uint8_t { NotConstant, ParamOnly, Constant };
  Kind kind = Kind::NotConstant;
  double value = 0.0;   // meaningful for Constant
  bool nonneg = false;  // provably >= 0 wherever defined

  bool is_constant() const { return kind == Kind::Constant; }
  bool is_constant(double v) const { return kind == Kind::Constant && value == v; }
  bool param_only() const { return kind == Kind::ParamOnly; }
};

/// Union-find backed congruence structure over e-classes of e-nodes, with the
/// constant / parameter-only folding analysis. Rebuilding is deferred: merges
/// accumulate until rebuild() restores congruence, hash-consing and analysis.
class EGraph {
 public:
  EGraph() = default;

  ClassId add(ENode node);
  ClassId add_expr(const Expr& e);

  ClassId find(ClassId id) const;
  /// Returns true if the two classes were distinct.
  bool merge(ClassId a, ClassId b);
  void rebuild();

  /// Adds a literal node to every Constant class lacking one and a fresh
  /// parameter to every ParamOnly class lacking a leaf. Returns true if
  /// anything was added. Requires a rebuilt graph.
  bool fold();

  ClassId fresh_param();

  const ClassData& data(ClassId id) const { return data_[find(id)]; }
  const ENode& node(NodeId n) const { return nodes_[n]; }

  /// Canonical class ids, ascending. Valid after rebuild().
  const std::vector<ClassId>& classes() const { return roots_; }
  /// Member nodes of a canonical class, sorted by op. Valid after rebuild().
  std::span<const NodeId> members(ClassId cls) const;

  std::size_t node_count() const { return live_nodes_; }
  std::size_t class_count() const { return roots_.size(); }

 private:
  ENode canonical(ENode n) const;
  ClassData make(const ENode& n) const;
  void rebuild_membership();
  bool update_analysis();

  std::vector<ENode> nodes_;
  std::vector<ClassId> node_class_;
  std::vector<std::uint8_t> dead_;
  mutable std::vector<ClassId> parent_;
  std::vector<ClassData> data_;
  absl::flat_hash_map<ENode, NodeId> memo_;
  std::size_t live_nodes_ = 0;
  std::uint64_t next_fresh_param_ = 1u << 16;

  std::vector<ClassId> roots_;
  std::vector<std::uint32_t> member_begin_;  // indexed by class id
  std::vector<std::uint32_t> member_end_;
  std::vector<NodeId> members_;
};

ClassData join(const ClassData& a, const ClassData& b);

}  // namespace esr
