#include "esrlab/simplify.hpp"

#include <array>
#include <limits>

#include "esrlab/error.hpp"

namespace esr {

namespace {

constexpr ClassId kUnbound = std::numeric_limits<ClassId>::max();

using Subst = std::array<ClassId, 4>;

struct Match {
  std::uint32_t rule;
  ClassId cls;
  Subst subst;
};

// Backtracking matcher over an explicit goal stack of (pattern position, class).
class Matcher {
 public:
  Matcher(const EGraph& g, const RewriteRule& rule, std::uint32_t rule_index, std::vector<Match>& out)
      : g_(g), rule_(rule), index_(rule_index), pat_(rule.lhs.nodes()), out_(out) {}

  void run(ClassId cls) {
    subst_.fill(kUnbound);
    goals_.clear();
    goals_.push_back({0, cls});
    root_ = cls;
    step();
  }

 private:
  struct Goal {
    std::uint32_t pos;
    ClassId cls;
  };

  void step() {
    if (goals_.empty()) {
      for (const Condition& c : rule_.conditions) {
        if (!guard_holds(c.guard, g_.data(subst_[c.var]))) return;
      }
      out_.push_back({index_, root_, subst_});
      return;
    }
    const Goal goal = goals_.back();
    goals_.pop_back();
    const Node& pn = pat_[goal.pos];
    switch (pn.op) {
      case Op::Var: {
        ClassId& slot = subst_[pn.index];
        if (slot == kUnbound) {
          slot = goal.cls;
          step();
          slot = kUnbound;
        } else if (g_.find(slot) == goal.cls) {
          step();
        }
        break;
      }
      case Op::Const:
        if (g_.data(goal.cls).is_constant(pn.value)) step();
        break;
      default: {
        const auto lhs_pos = goal.pos + 1;
        const bool binary = arity(pn.op) == 2;
        const auto rhs_pos = binary ? static_cast<std::uint32_t>(end_of(lhs_pos)) : 0u;
        for (NodeId n : g_.members(goal.cls)) {
          const ENode& en = g_.node(n);
          if (en.op < pn.op) continue;
          if (en.op > pn.op) break;
          const std::size_t depth = goals_.size();
          if (binary) goals_.push_back({rhs_pos, g_.find(en.b)});
          goals_.push_back({lhs_pos, g_.find(en.a)});
          step();
          goals_.resize(depth);
        }
      }
    }
    goals_.push_back(goal);
  }

  std::size_t end_of(std::size_t pos) const {
    std::size_t need = 1;
    while (need > 0) {
      need += static_cast<std::size_t>(arity(pat_[pos].op));
      --need;
      ++pos;
    }
    return pos;
  }

  const EGraph& g_;
  const RewriteRule& rule_;
  std::uint32_t index_;
  std::span<const Node> pat_;
  std::vector<Match>& out_;
  std::vector<Goal> goals_;
  Subst subst_{};
  ClassId root_ = 0;
};

ClassId instantiate(EGraph& g, std::span<const Node> pat, std::size_t& pos, const Subst& s) {
  const Node& n = pat[pos++];
  switch (n.op) {
    case Op::Var:
      return s[n.index];
    case Op::Const:
      return g.add(ENode{Op::Const, 0, 0, std::bit_cast<std::uint64_t>(n.value)});
    case Op::Param:
      throw Error("parameter leaf in rewrite pattern");
    default: {
      ENode en{n.op, 0, 0, 0};
      en.a = instantiate(g, pat, pos, s);
      if (arity(n.op) == 2) en.b = instantiate(g, pat, pos, s);
      return g.add(en);
    }
  }
}

void rebuild_and_fold(EGraph& g) {
  g.rebuild();
  while (g.fold()) g.rebuild();
}

}  // namespace

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Saturated: return "saturated";
    case StopReason::IterationLimit: return "iteration-limit";
    case StopReason::NodeBudget: return "node-budget";
  }
  return "";
}

SaturationReport saturate(EGraph& g, const std::vector<RewriteRule>& rules, const EqsatConfig& cfg) {
  SaturationReport report;
  report.reason = StopReason::IterationLimit;
  rebuild_and_fold(g);
  std::vector<Match> matches;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    report.iterations = iter;
    matches.clear();
    for (std::uint32_t r = 0; r < rules.size(); ++r) {
      Matcher m(g, rules[r], r, matches);
      const Op root_op = rules[r].lhs.root().op;
      for (ClassId c : g.classes()) {
        // Folded classes already extract to a single leaf.
        if (g.data(c).kind != ClassData::Kind::NotConstant) continue;
        bool has = false;
        for (NodeId n : g.members(c)) {
          if (g.node(n).op == root_op) {
            has = true;
            break;
          }
        }
        if (has) m.run(c);
      }
    }

    const std::size_t nodes_before = g.node_count();
    bool changed = false;
    bool out_of_budget = false;
    for (const Match& mt : matches) {
      if (g.node_count() > cfg.node_budget) {
        out_of_budget = true;
        break;
      }
      std::size_t pos = 0;
      const ClassId id = instantiate(g, rules[mt.rule].rhs.nodes(), pos, mt.subst);
      if (g.merge(mt.cls, id)) changed = true;
    }
    if (g.node_count() != nodes_before) changed = true;
    const std::size_t classes_before = g.class_count();
    rebuild_and_fold(g);
    if (g.class_count() != classes_before) changed = true;
    if (out_of_budget || g.node_count() > cfg.node_budget) {
      report.reason = StopReason::NodeBudget;
      break;
    }
    if (!changed) {
      report.reason = StopReason::Saturated;
      break;
    }
  }
  report.nodes = g.node_count();
  report.classes = g.class_count();
  return report;
}

namespace {

class Extractor {
 public:
  explicit Extractor(const EGraph& g) : g_(g) {}

  void solve() {
    std::size_t max_id = 0;
    for (ClassId c : g_.classes()) max_id = std::max<std::size_t>(max_id, c);
    best_.assign(max_id + 1, Best{});
    bool changed = true;
    for (int pass = 0; changed && pass < 10000; ++pass) {
      changed = false;
      for (ClassId c : g_.classes()) {
        Best cand;
        for (NodeId n : g_.members(c)) {
          Best b;
          if (!cost_of(n, b)) continue;
          if (cand.node == kNone || better(b, cand)) cand = b;
        }
        Best& cur = best_[c];
        if (cand.node != kNone && (cand.node != cur.node || cand.params != cur.params || cand.size != cur.size)) {
          cur = cand;
          changed = true;
        }
      }
    }
  }

  Expr build(ClassId root) const {
    root = g_.find(root);
    if (best_[root].node == kNone) throw ExtractionError("no finite expression in root class");
    std::vector<Node> out;
    emit(root, out);
    return Expr::from_preorder(std::move(out));
  }

 private:
  static constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

  struct Best {
    NodeId node = kNone;
    std::uint32_t params = 0;
    std::uint32_t size = 0;
  };

  bool cost_of(NodeId n, Best& out) const {
    const ENode& en = g_.node(n);
    out.node = n;
    out.params = en.op == Op::Param ? 1 : 0;
    out.size = 1;
    const int k = arity(en.op);
    for (int i = 0; i < k; ++i) {
      const Best& cb = best_[g_.find(i == 0 ? en.a : en.b)];
      if (cb.node == kNone) return false;
      out.params += cb.params;
      out.size += cb.size;
    }
    return true;
  }

  bool better(const Best& x, const Best& y) const {
    if (x.params != y.params) return x.params < y.params;
    if (x.size != y.size) return x.size < y.size;
    return compare_nodes(x.node, y.node) < 0;
  }

  int compare_classes(ClassId a, ClassId b) const {
    a = g_.find(a);
    b = g_.find(b);
    if (a == b) return 0;
    return compare_nodes(best_[a].node, best_[b].node);
  }

  int compare_nodes(NodeId x, NodeId y) const {
    if (x == y) return 0;
    const ENode& a = g_.node(x);
    const ENode& b = g_.node(y);
    if (a.op != b.op) return a.op < b.op ? -1 : 1;
    switch (a.op) {
      case Op::Param:
        return 0;
      case Op::Var: {
        const bool ha = a.payload >= kHoleVarBase, hb = b.payload >= kHoleVarBase;
        if (ha && hb) return 0;
        if (a.payload != b.payload) return a.payload < b.payload ? -1 : 1;
        return 0;
      }
      case Op::Const: {
        const double va = std::bit_cast<double>(a.payload), vb = std::bit_cast<double>(b.payload);
        if (va != vb) return va < vb ? -1 : 1;
        return 0;
      }
      default:
        break;
    }
    if (const int c = compare_classes(a.a, b.a); c != 0) return c;
    if (arity(a.op) == 2) return compare_classes(a.b, b.b);
    return 0;
  }

  void emit(ClassId c, std::vector<Node>& out) const {
    const ENode& en = g_.node(best_[g_.find(c)].node);
    switch (en.op) {
      case Op::Var:
      case Op::Param:
        out.push_back(Node{en.op, static_cast<std::uint32_t>(en.payload), 0.0});
        return;
      case Op::Const:
        out.push_back(Node{Op::Const, 0, std::bit_cast<double>(en.payload)});
        return;
      default:
        out.push_back(Node{en.op, 0, 0.0});
        emit(en.a, out);
        if (arity(en.op) == 2) emit(en.b, out);
    }
  }

  const EGraph& g_;
  std::vector<Best> best_;
};

}  // namespace

Expr extract(const EGraph& g, ClassId root) {
  Extractor ex(g);
  ex.solve();
  return normalize_labels(ex.build(root));
}

Expr normalize_labels(const Expr& e) {
  std::vector<Node> nodes(e.nodes().begin(), e.nodes().end());
  std::vector<std::uint32_t> seen;
  bool any_hole = false;
  for (Node& n : nodes) {
    if (n.op != Op::Var || n.index < kHoleVarBase) continue;
    any_hole = true;
    std::uint32_t k = 0;
    while (k < seen.size() && seen[k] != n.index) ++k;
    if (k == seen.size()) seen.push_back(n.index);
    n.index = kHoleVarBase + k;
  }
  if (!any_hole) return e.renumber_params();
  return Expr::from_preorder(std::move(nodes)).renumber_params();
}

CanonicalForm canonicalize(const Expr& e, const EqsatConfig& cfg, SaturationReport* report) {
  EGraph g;
  const ClassId root = g.add_expr(e);
  if (g.node_count() > cfg.node_budget) throw CapacityError("expression exceeds node budget");
  const SaturationReport rep = saturate(g, default_rules(), cfg);
  if (report != nullptr) *report = rep;
  CanonicalForm out;
  out.expression = extract(g, root);
  out.hash = structural_hash(out.expression);
  out.params = out.expression.param_count();
  out.nodes = out.expression.size();
  return out;
}

CanonicalForm canonicalize(const Expr& e, const EqsatConfig& cfg) { return canonicalize(e, cfg, nullptr); }

bool simplifies_to_constant(const Expr& e, const EqsatConfig& cfg) {
  const CanonicalForm cf = canonicalize(e, cfg);
  return cf.nodes == 1 && (cf.expression.root().op == Op::Param || cf.expression.root().op == Op::Const);
}

}  // namespace esr
