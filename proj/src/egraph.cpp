#include "esrlab/egraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "esrlab/hash.hpp"

namespace esr {

namespace {

double apply_op(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Inv: return 1.0 / a;
    case Op::PowAbs: return std::pow(std::fabs(a), b);
    case Op::Neg: return -a;
    case Op::Abs: return std::fabs(a);
    default: return std::nan("");
  }
}

}  // namespace

ClassData join(const ClassData& a, const ClassData& b) {
  ClassData out = a.kind >= b.kind ? a : b;
  out.nonneg = a.nonneg || b.nonneg;
  return out;
}

ClassId EGraph::find(ClassId id) const {
  ClassId root = id;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[id] != root) {
    const ClassId next = parent_[id];
    parent_[id] = root;
    id = next;
  }
  return root;
}

ENode EGraph::canonical(ENode n) const {
  const int k = arity(n.op);
  if (k >= 1) n.a = find(n.a);
  if (k == 2) n.b = find(n.b);
  return n;
}

ClassData EGraph::make(const ENode& n) const {
  using Kind = ClassData::Kind;
  ClassData d;
  switch (n.op) {
    case Op::Var:
      return d;
    case Op::Param:
      d.kind = Kind::ParamOnly;
      return d;
    case Op::Const: {
      const double v = std::bit_cast<double>(n.payload);
      d.kind = Kind::Constant;
      d.value = v;
      d.nonneg = v >= 0.0;
      return d;
    }
    default:
      break;
  }
  const int k = arity(n.op);
  const ClassData& a = data_[find(n.a)];
  const ClassData kb = k == 2 ? data_[find(n.b)] : ClassData{Kind::Constant, 0.0, true};
  const ClassData& b = kb;

  switch (n.op) {
    case Op::Add:
    case Op::Mul:
    case Op::Div:
      d.nonneg = a.nonneg && b.nonneg;
      break;
    case Op::Inv:
      d.nonneg = a.nonneg;
      break;
    case Op::PowAbs:
    case Op::Abs:
      d.nonneg = true;
      break;
    default:
      break;
  }

  if (a.is_constant() && b.is_constant()) {
    const double v = apply_op(n.op, a.value, b.value);
    if (std::isfinite(v)) {
      d.kind = Kind::Constant;
      d.value = v == 0.0 ? 0.0 : v;
      d.nonneg = d.value >= 0.0;
    }
    // A non-finite fold carries no information.
    return d;
  }
  if (a.kind != Kind::NotConstant && b.kind != Kind::NotConstant) d.kind = Kind::ParamOnly;
  return d;
}

ClassId EGraph::add(ENode node) {
  node = canonical(node);
  if (node.op == Op::Const) node.payload = canonical_bits(std::bit_cast<double>(node.payload));
  if (auto it = memo_.find(node); it != memo_.end()) return find(node_class_[it->second]);
  const auto nid = static_cast<NodeId>(nodes_.size());
  const auto cid = static_cast<ClassId>(parent_.size());
  nodes_.push_back(node);
  node_class_.push_back(cid);
  dead_.push_back(0);
  parent_.push_back(cid);
  data_.push_back(make(node));
  memo_.emplace(node, nid);
  ++live_nodes_;
  return cid;
}

ClassId EGraph::add_expr(const Expr& e) {
  std::vector<ClassId> stack;
  const auto nodes = e.nodes();
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const Node& n = nodes[i];
    ENode en{n.op, 0, 0, 0};
    switch (n.op) {
      case Op::Var:
      case Op::Param:
        en.payload = n.index;
        break;
      case Op::Const:
        en.payload = std::bit_cast<std::uint64_t>(n.value);
        break;
      default: {
        en.a = stack.back();
        stack.pop_back();
        if (arity(n.op) == 2) {
          en.b = stack.back();
          stack.pop_back();
        }
      }
    }
    stack.push_back(add(en));
  }
  return stack.back();
}

ClassId EGraph::fresh_param() {
  return add(ENode{Op::Param, 0, 0, next_fresh_param_++});
}

bool EGraph::merge(ClassId a, ClassId b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  data_[a] = join(data_[a], data_[b]);
  return true;
}

void EGraph::rebuild() {
  bool changed = true;
  while (changed) {
    changed = false;
    memo_.clear();
    memo_.reserve(live_nodes_);
    for (NodeId i = 0; i < nodes_.size(); ++i) {
      if (dead_[i]) continue;
      nodes_[i] = canonical(nodes_[i]);
      auto [it, inserted] = memo_.try_emplace(nodes_[i], i);
      if (inserted) continue;
      if (merge(node_class_[i], node_class_[it->second])) changed = true;
      dead_[i] = 1;
      --live_nodes_;
    }
  }
  while (update_analysis()) {
  }
  rebuild_membership();
}

bool EGraph::update_analysis() {
  bool changed = false;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (dead_[i]) continue;
    const ClassId c = find(node_class_[i]);
    const ClassData old = data_[c];
    const ClassData joined = join(old, make(nodes_[i]));
    if (joined.kind != old.kind || joined.nonneg != old.nonneg) {
      data_[c] = joined;
      changed = true;
    }
  }
  return changed;
}

void EGraph::rebuild_membership() {
  const std::size_t nclass = parent_.size();
  member_begin_.assign(nclass, 0);
  member_end_.assign(nclass, 0);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (!dead_[i]) ++member_end_[find(node_class_[i])];
  }
  roots_.clear();
  std::uint32_t offset = 0;
  for (ClassId c = 0; c < nclass; ++c) {
    const std::uint32_t count = member_end_[c];
    member_begin_[c] = offset;
    member_end_[c] = offset;
    if (count > 0) roots_.push_back(c);
    offset += count;
  }
  members_.assign(offset, 0);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (!dead_[i]) members_[member_end_[find(node_class_[i])]++] = i;
  }
  for (ClassId c : roots_) {
    std::sort(members_.begin() + member_begin_[c], members_.begin() + member_end_[c],
              [&](NodeId x, NodeId y) {
                if (nodes_[x].op != nodes_[y].op) return nodes_[x].op < nodes_[y].op;
                return x < y;
              });
  }
}

std::span<const NodeId> EGraph::members(ClassId cls) const {
  cls = find(cls);
  return {members_.data() + member_begin_[cls], member_end_[cls] - member_begin_[cls]};
}

bool EGraph::fold() {
  bool changed = false;
  const std::vector<ClassId> roots = roots_;
  for (ClassId c : roots) {
    const ClassData d = data_[c];
    if (d.kind == ClassData::Kind::NotConstant) continue;
    bool has_leaf = false;
    for (std::uint32_t k = member_begin_[c]; k < member_end_[c]; ++k) {
      const Op op = nodes_[members_[k]].op;
      if (op == Op::Const || (op == Op::Param && !d.is_constant())) has_leaf = true;
    }
    if (has_leaf) continue;
    ClassId leaf;
    if (d.is_constant()) {
      leaf = add(ENode{Op::Const, 0, 0, std::bit_cast<std::uint64_t>(d.value)});
    } else {
      leaf = fresh_param();
    }
    merge(c, leaf);
    changed = true;
  }
  return changed;
}

}  // namespace esr
