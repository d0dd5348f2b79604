#include "esrlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>

#include "esrlab/error.hpp"
#include "esrlab/hash.hpp"

namespace esr {

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::Var: return "var";
    case Op::Param: return "param";
    case Op::Const: return "const";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Inv: return "inv";
    case Op::PowAbs: return "powabs";
    case Op::Neg: return "neg";
    case Op::Abs: return "abs";
  }
  return "?";
}

bool operator==(const Node& a, const Node& b) noexcept {
  if (a.op != b.op) return false;
  if (a.op == Op::Const) return canonical_bits(a.value) == canonical_bits(b.value);
  return a.index == b.index;
}

Expr Expr::variable(std::uint32_t index) { return Expr({Node{Op::Var, index, 0.0}}); }

Expr Expr::parameter(std::uint32_t index) { return Expr({Node{Op::Param, index, 0.0}}); }

Expr Expr::constant(double value) { return Expr({Node{Op::Const, 0, value}}); }

Expr Expr::unary(Op op, const Expr& child) {
  if (arity(op) != 1) throw Error("unary() called with non-unary op " + std::string(op_name(op)));
  std::vector<Node> nodes;
  nodes.reserve(child.size() + 1);
  nodes.push_back(Node{op, 0, 0.0});
  nodes.insert(nodes.end(), child.nodes_.begin(), child.nodes_.end());
  return Expr(std::move(nodes));
}

Expr Expr::binary(Op op, const Expr& lhs, const Expr& rhs) {
  if (arity(op) != 2) throw Error("binary() called with non-binary op " + std::string(op_name(op)));
  std::vector<Node> nodes;
  nodes.reserve(lhs.size() + rhs.size() + 1);
  nodes.push_back(Node{op, 0, 0.0});
  nodes.insert(nodes.end(), lhs.nodes_.begin(), lhs.nodes_.end());
  nodes.insert(nodes.end(), rhs.nodes_.begin(), rhs.nodes_.end());
  return Expr(std::move(nodes));
}

Expr Expr::from_preorder(std::vector<Node> nodes) {
  // `open` counts subtrees still to be read.
  std::size_t open = 1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (open == 0) throw Error("preorder sequence has trailing nodes");
    open = open - 1 + static_cast<std::size_t>(arity(nodes[i].op));
  }
  if (open != 0 || nodes.empty()) throw Error("preorder sequence is incomplete");
  return Expr(std::move(nodes));
}

std::size_t Expr::subtree_end(std::size_t pos) const noexcept {
  std::size_t open = 1;
  while (open > 0) {
    open = open - 1 + static_cast<std::size_t>(arity(nodes_[pos].op));
    ++pos;
  }
  return pos;
}

Expr Expr::subtree(std::size_t pos) const {
  return Expr(std::vector<Node>(nodes_.begin() + static_cast<std::ptrdiff_t>(pos),
                                nodes_.begin() + static_cast<std::ptrdiff_t>(subtree_end(pos))));
}

Expr Expr::replace_subtree(std::size_t pos, const Expr& replacement) const {
  const std::size_t end = subtree_end(pos);
  std::vector<Node> nodes;
  nodes.reserve(nodes_.size() - (end - pos) + replacement.size());
  nodes.insert(nodes.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(pos));
  nodes.insert(nodes.end(), replacement.nodes_.begin(), replacement.nodes_.end());
  nodes.insert(nodes.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end), nodes_.end());
  return Expr(std::move(nodes));
}

Expr Expr::child(int k) const {
  std::size_t pos = 1;
  for (int i = 0; i < k; ++i) pos = subtree_end(pos);
  return subtree(pos);
}

int Expr::depth() const {
  // Walk preorder keeping a stack of remaining-children counters.
  int best = 0;
  std::vector<std::pair<int, int>> stack;  // (depth, children left)
  for (const Node& n : nodes_) {
    const int d = stack.empty() ? 0 : stack.back().first + 1;
    best = std::max(best, d);
    if (!stack.empty() && --stack.back().second == 0) stack.pop_back();
    if (arity(n.op) > 0) stack.emplace_back(d, arity(n.op));
    // Leaves close finished parents.
    while (!stack.empty() && stack.back().second == 0) stack.pop_back();
  }
  return best;
}

std::size_t Expr::param_count() const {
  std::vector<std::uint32_t> seen;
  for (const Node& n : nodes_) {
    if (n.op == Op::Param && std::find(seen.begin(), seen.end(), n.index) == seen.end()) {
      seen.push_back(n.index);
    }
  }
  return seen.size();
}

std::uint32_t Expr::max_param_index() const {
  std::uint32_t m = 0;
  for (const Node& n : nodes_) {
    if (n.op == Op::Param) m = std::max(m, n.index);
  }
  return m;
}

std::uint32_t Expr::max_var_index() const {
  std::uint32_t m = 0;
  for (const Node& n : nodes_) {
    if (n.op == Op::Var) m = std::max(m, n.index);
  }
  return m;
}

Expr Expr::renumber_params() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> mapping;
  std::vector<Node> nodes = nodes_;
  for (Node& n : nodes) {
    if (n.op != Op::Param) continue;
    auto it = std::find_if(mapping.begin(), mapping.end(),
                           [&](const auto& m) { return m.first == n.index; });
    if (it == mapping.end()) {
      mapping.emplace_back(n.index, static_cast<std::uint32_t>(mapping.size() + 1));
      n.index = mapping.back().second;
    } else {
      n.index = it->second;
    }
  }
  return Expr(std::move(nodes));
}

Expr Expr::fresh_params() const {
  std::vector<Node> nodes = nodes_;
  std::uint32_t next = 1;
  for (Node& n : nodes) {
    if (n.op == Op::Param) n.index = next++;
  }
  return Expr(std::move(nodes));
}

bool Expr::params_contiguous() const {
  const std::uint32_t m = max_param_index();
  return param_count() == m;
}

std::uint64_t structural_hash(std::span<const Node> nodes) noexcept {
  std::uint64_t h = 0x5157e9a1c0ffee11ULL;
  for (const Node& n : nodes) {
    std::uint64_t word = static_cast<std::uint64_t>(n.op);
    if (n.op == Op::Const) {
      word ^= mix64(canonical_bits(n.value)) << 4;
    } else if (is_leaf(n.op)) {
      word ^= static_cast<std::uint64_t>(n.index) << 8;
    }
    h = hash_combine(h, word);
  }
  return mix64(h ^ nodes.size());
}

std::uint64_t structural_hash(const Expr& e) noexcept { return structural_hash(e.nodes()); }

std::strong_ordering compare_preorder(std::span<const Node> a, std::span<const Node> b,
                                      bool ignore_param_labels) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].op != b[i].op) return a[i].op <=> b[i].op;
    switch (a[i].op) {
      case Op::Var:
        if (a[i].index != b[i].index) return a[i].index <=> b[i].index;
        break;
      case Op::Param:
        if (!ignore_param_labels && a[i].index != b[i].index) return a[i].index <=> b[i].index;
        break;
      case Op::Const: {
        const auto ba = canonical_bits(a[i].value);
        const auto bb = canonical_bits(b[i].value);
        if (ba != bb) {
          if (a[i].value < b[i].value) return std::strong_ordering::less;
          if (a[i].value > b[i].value) return std::strong_ordering::greater;
          return ba <=> bb;
        }
        break;
      }
      default:
        break;
    }
  }
  return a.size() <=> b.size();
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Binding strength of the rendered form of a node.
enum Prec : int { kAdditive = 1, kMultiplicative = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return kAdditive;
    case Op::Mul:
    case Op::Div:
    case Op::Inv: return kMultiplicative;
    case Op::Neg: return kUnary;
    case Op::PowAbs: return kPower;
    case Op::Const: return (n.value < 0.0 || std::signbit(n.value)) ? kUnary : kAtom;
    default: return kAtom;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class Renderer {
 public:
  Renderer(const Expr& e, std::span<const std::string> names) : e_(e), names_(names) {}

  std::string run() {
    std::string out;
    emit(0, out);
    return out;
  }

 private:
  // Emits the subtree at `pos`, returns the position after it.
  std::size_t emit(std::size_t pos, std::string& out) {
    const Node& n = e_[pos];
    switch (n.op) {
      case Op::Var:
        if (n.index < names_.size()) {
          out += names_[n.index];
        } else {
          out += n.index == 0 ? std::string("x") : "x" + std::to_string(n.index + 1);
        }
        return pos + 1;
      case Op::Param:
        out += "p" + std::to_string(n.index);
        return pos + 1;
      case Op::Const:
        out += format_number(n.value);
        return pos + 1;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        const int level = precedence(n);
        const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? " * " : " / ";
        std::size_t next = emit_wrapped(pos + 1, out, [&](int p) { return p < level; });
        out += sym;
        return emit_wrapped(next, out, [&](int p) { return p <= level; });
      }
      case Op::Inv:
        out += "1.0 / ";
        return emit_wrapped(pos + 1, out, [](int p) { return p <= kMultiplicative; });
      case Op::Neg: {
        out += "-";
        const Node& c = e_[pos + 1];
        const bool wrap = c.op == Op::Const || c.op == Op::Neg || precedence(c) < kUnary;
        return emit_wrapped(pos + 1, out, [wrap](int) { return wrap; });
      }
      case Op::Abs: {
        out += "|";
        std::size_t next = emit(pos + 1, out);
        out += "|";
        return next;
      }
      case Op::PowAbs: {
        out += "|";
        std::size_t next = emit(pos + 1, out);
        out += "| ^ ";
        return emit_wrapped(next, out, [](int p) { return p < kPower; });
      }
    }
    return pos + 1;
  }

  template <class NeedsParens>
  std::size_t emit_wrapped(std::size_t pos, std::string& out, NeedsParens needs) {
    if (needs(precedence(e_[pos]))) {
      out += "(";
      std::size_t next = emit(pos, out);
      out += ")";
      return next;
    }
    return emit(pos, out);
  }

  const Expr& e_;
  std::span<const std::string> names_;
};

}  // namespace

std::string render(const Expr& e) { return Renderer(e, {}).run(); }

std::string render(const Expr& e, std::span<const std::string> var_names) {
  return Renderer(e, var_names).run();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Bar, Comma, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t column;  // 1-based
  double number = 0.0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      double v = 0.0;
      auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
      if (res.ec != std::errc()) throw ParseError("malformed number", col);
      const std::size_t len = static_cast<std::size_t>(res.ptr - (s.data() + i));
      out.push_back(Token{Tok::Number, s.substr(i, len), col, v});
      i += len;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back(Token{Tok::Ident, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '|': kind = Tok::Bar; break;
      case ',': kind = Tok::Comma; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", col);
    }
    out.push_back(Token{kind, s.substr(i, 1), col});
    ++i;
  }
  out.push_back(Token{Tok::End, {}, s.size() + 1});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Expr run() {
    Expr e = expression();
    if (peek().kind != Tok::End) throw ParseError("unexpected token '" + std::string(peek().text) + "'", peek().column);
    return e;
  }

 private:
  // A parsed operand plus how it was written, which decides the meaning of
  // a following '/' or '^'.
  struct Operand {
    Expr expr;
    bool literal_one = false;  // the bare token "1.0"
    bool barred = false;       // written as |e|; expr holds e, not abs(e)
  };

  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      throw ParseError(std::string("expected ") + what, peek().column);
    }
    ++pos_;
  }

  static Expr settle(Operand o) { return o.barred ? abs(o.expr) : std::move(o.expr); }

  Expr expression() {
    Expr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Op op = take().kind == Tok::Plus ? Op::Add : Op::Sub;
      Expr rhs = term();
      lhs = Expr::binary(op, lhs, rhs);
    }
    return lhs;
  }

  Expr term() {
    Operand first = unary();
    Expr lhs;
    bool pending_one = first.literal_one;
    lhs = settle(std::move(first));
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Tok t = take().kind;
      Expr rhs = settle(unary());
      if (t == Tok::Slash && pending_one) {
        lhs = inv(rhs);
      } else {
        lhs = Expr::binary(t == Tok::Star ? Op::Mul : Op::Div, lhs, rhs);
      }
      pending_one = false;
    }
    return lhs;
  }

  Operand unary() {
    if (peek().kind == Tok::Minus) {
      take();
      if (peek().kind == Tok::Number) {
        const Token& num = take();
        Operand lit_operand{lit(-num.number)};
        return power(std::move(lit_operand));
      }
      return Operand{neg(settle(unary()))};
    }
    return power(primary());
  }

  Operand power(Operand base) {
    if (peek().kind != Tok::Caret) return base;
    take();
    Expr exponent = settle(unary());
    return Operand{powabs(base.expr, exponent)};
  }

  Operand primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        return Operand{lit(t.number), t.text == "1.0"};
      }
      case Tok::LParen: {
        take();
        Expr e = expression();
        expect(Tok::RParen, "')'");
        return Operand{std::move(e)};
      }
      case Tok::Bar: {
        take();
        Expr e = expression();
        expect(Tok::Bar, "'|'");
        return Operand{std::move(e), false, true};
      }
      case Tok::Ident:
        return identifier();
      case Tok::End:
        throw ParseError("unexpected end of input", t.column);
      default:
        throw ParseError("unexpected token '" + std::string(t.text) + "'", t.column);
    }
  }

  Operand identifier() {
    const Token& t = take();
    const std::string_view name = t.text;
    if (peek().kind == Tok::LParen) {
      take();
      std::vector<Expr> args;
      args.push_back(expression());
      while (peek().kind == Tok::Comma) {
        take();
        args.push_back(expression());
      }
      expect(Tok::RParen, "')'");
      auto need = [&](std::size_t n) {
        if (args.size() != n) throw ParseError("wrong number of arguments to " + std::string(name), t.column);
      };
      if (name == "inv") { need(1); return Operand{inv(args[0])}; }
      if (name == "abs") { need(1); return Operand{abs(args[0])}; }
      if (name == "neg") { need(1); return Operand{neg(args[0])}; }
      if (name == "powabs") { need(2); return Operand{powabs(args[0], args[1])}; }
      throw ParseError("unknown function '" + std::string(name) + "'", t.column);
    }
    auto index_suffix = [&](std::string_view digits) -> std::optional<std::uint32_t> {
      if (digits.empty()) return std::nullopt;
      std::uint32_t v = 0;
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) return std::nullopt;
      return v;
    };
    if (name == "x") return Operand{x(0)};
    if (name.front() == 'x') {
      if (auto idx = index_suffix(name.substr(1)); idx && *idx >= 1) return Operand{x(*idx - 1)};
    }
    if (name.front() == 'p') {
      if (auto idx = index_suffix(name.substr(1)); idx && *idx >= 1) return Operand{p(*idx)};
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", t.column);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace esr
