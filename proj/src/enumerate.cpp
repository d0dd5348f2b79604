#include "esrlab/enumerate.hpp"

#include <array>

#include <absl/container/flat_hash_set.h>

#include "esrlab/egraph.hpp"
#include "esrlab/hash.hpp"
#include "esrlab/parallel.hpp"
#include "esrlab/rules.hpp"

namespace esr {

namespace {

// Production order of the grammar.
constexpr std::array<Op, 8> kSymbols{Op::Var, Op::Param, Op::Inv, Op::PowAbs,
                                     Op::Add, Op::Sub,   Op::Mul, Op::Div};

// A derivation in progress: a preorder prefix of committed symbols followed
// by `holes` nonterminals. Expanding the first nonterminal keeps the holes a suffix.
struct Partial {
  std::vector<Node> committed;
  std::uint32_t holes = 1;
  std::uint32_t params = 0;
};

void expand(const Partial& parent, int max_len, std::vector<Partial>& out) {
  const std::size_t len = parent.committed.size() + 1;
  for (Op op : kSymbols) {
    const std::uint32_t holes = parent.holes - 1 + static_cast<std::uint32_t>(arity(op));
    if (len + holes > static_cast<std::size_t>(max_len)) continue;
    Partial child;
    child.committed.reserve(len);
    child.committed = parent.committed;
    child.params = parent.params;
    Node n{op, 0, 0.0};
    if (op == Op::Param) n.index = ++child.params;
    child.committed.push_back(n);
    child.holes = holes;
    out.push_back(std::move(child));
  }
}

Expr to_expr(const Partial& p) {
  std::vector<Node> nodes = p.committed;
  for (std::uint32_t i = 0; i < p.holes; ++i) nodes.push_back(Node{Op::Var, kHoleVarBase + i, 0.0});
  return Expr::from_preorder(std::move(nodes));
}

}  // namespace

void enumerate_trees(int max_len, const std::function<void(const Expr&)>& sink) {
  std::vector<Partial> level{Partial{}};
  std::vector<Partial> next;
  while (!level.empty()) {
    next.clear();
    std::vector<Partial> children;
    for (const Partial& p : level) {
      children.clear();
      expand(p, max_len, children);
      for (Partial& c : children) {
        if (c.holes == 0) {
          sink(Expr::from_preorder(std::move(c.committed)));
        } else {
          next.push_back(std::move(c));
        }
      }
    }
    level.swap(next);
  }
}

std::vector<std::uint64_t> count_trees(int max_len) {
  std::vector<std::uint64_t> t(static_cast<std::size_t>(std::max(max_len, 0)) + 1, 0);
  for (int n = 1; n <= max_len; ++n) {
    if (n == 1) {
      t[1] = 2;
      continue;
    }
    std::uint64_t pairs = 0;
    for (int a = 1; a < n - 1; ++a) pairs += t[a] * t[n - 1 - a];
    t[n] = t[n - 1] + 5 * pairs;
  }
  return t;
}

Catalog build_catalog(int max_len, const CatalogOptions& opt, EnumerationStats* stats) {
  Catalog cat;
  cat.max_len = max_len;
  cat.grammar_id = kGrammarId;
  cat.rules_id = rule_set_id();
  cat.eqsat = opt.eqsat;

  EnumerationStats local;
  EnumerationStats& st = stats != nullptr ? *stats : local;
  const auto slots = static_cast<std::size_t>(max_len) + 1;
  st.partials.assign(slots, 0);
  st.pruned.assign(slots, 0);
  st.complete.assign(slots, 0);
  st.unique.assign(slots, 0);

  absl::flat_hash_set<std::uint64_t> seen_partials;
  std::vector<Partial> level{Partial{}};
  std::vector<Partial> children;
  std::vector<CanonicalForm> forms;
  for (int len = 1; len <= max_len && !level.empty(); ++len) {
    children.clear();
    for (const Partial& p : level) expand(p, max_len, children);
    level.clear();
    level.shrink_to_fit();

    forms.assign(children.size(), CanonicalForm{});
    parallel_for(children.size(), opt.workers, [&](std::size_t i) {
      forms[i] = canonicalize(to_expr(children[i]), opt.eqsat);
    });

    for (std::size_t i = 0; i < children.size(); ++i) {
      Partial& c = children[i];
      const CanonicalForm& f = forms[i];
      if (c.holes == 0) {
        ++st.complete[static_cast<std::size_t>(len)];
        CatalogEntry e{f.expression, f.hash, static_cast<std::uint32_t>(f.nodes),
                       static_cast<std::uint32_t>(f.params)};
        if (cat.insert(std::move(e))) ++st.unique[static_cast<std::size_t>(len)];
        continue;
      }
      ++st.partials[static_cast<std::size_t>(len)];
      if (!seen_partials.insert(hash_combine(f.hash, c.holes)).second) {
        ++st.pruned[static_cast<std::size_t>(len)];
        continue;
      }
      level.push_back(std::move(c));
    }
    if (opt.progress) opt.progress(len, cat.size());
  }
  return cat;
}

}  // namespace esr
