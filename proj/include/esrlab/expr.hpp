#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esr {

/// Node kinds. The grammar only produces Var, Param, Inv, PowAbs and the four
/// arithmetic operators; Const, Neg and Abs appear only as rewrite results.
/// The declaration order is the tie-break order used by canonical extraction.
enum class Op : std::uint8_t { Var, Param, Const, Add, Sub, Mul, Div, Inv, PowAbs, Neg, Abs };

inline constexpr int kOpCount = 11;

constexpr int arity(Op op) noexcept {
  switch (op) {
    case Op::Var:
    case Op::Param:
    case Op::Const:
      return 0;
    case Op::Inv:
    case Op::Neg:
    case Op::Abs:
      return 1;
    default:
      return 2;
  }
}

constexpr bool is_leaf(Op op) noexcept { return arity(op) == 0; }

std::string_view op_name(Op op) noexcept;

/// One node of a preorder-encoded expression tree.
struct Node {
  Op op = Op::Var;
  /// Variable index (0-based) for Var, parameter index (1-based) for Param.
  std::uint32_t index = 0;
  /// Literal value for Const.
  double value = 0.0;

  friend bool operator==(const Node& a, const Node& b) noexcept;
};

/// Immutable expression tree stored in preorder. Children of the node at
/// position i start at i + 1; arity is implied by the op.
class Expr {
 public:
  /// The variable x.
  Expr() : nodes_{Node{Op::Var, 0, 0.0}} {}

  static Expr variable(std::uint32_t index = 0);
  static Expr parameter(std::uint32_t index);
  static Expr constant(double value);
  static Expr unary(Op op, const Expr& child);
  static Expr binary(Op op, const Expr& lhs, const Expr& rhs);

  /// Builds an expression from a preorder node list; throws esr::Error if the
  /// arities do not describe exactly one tree.
  static Expr from_preorder(std::vector<Node> nodes);

  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& root() const noexcept { return nodes_.front(); }
  const Node& operator[](std::size_t pos) const noexcept { return nodes_[pos]; }

  /// One past the last node of the subtree rooted at `pos`.
  std::size_t subtree_end(std::size_t pos) const noexcept;
  Expr subtree(std::size_t pos) const;
  /// Copy of this expression with the subtree at `pos` replaced by `replacement`.
  Expr replace_subtree(std::size_t pos, const Expr& replacement) const;
  /// Child `k` of the root.
  Expr child(int k) const;

  /// Tree depth counted in edges; a leaf has depth 0.
  int depth() const;
  /// Number of distinct parameter indices.
  std::size_t param_count() const;
  /// Largest parameter index (0 when there are none).
  std::uint32_t max_param_index() const;
  std::uint32_t max_var_index() const;
  /// Parameters renamed p1, p2, ... in order of first preorder appearance.
  Expr renumber_params() const;
  /// Every Param leaf receives its own index, numbered in preorder.
  Expr fresh_params() const;
  bool params_contiguous() const;

  friend bool operator==(const Expr& a, const Expr& b) noexcept { return a.nodes_ == b.nodes_; }

 private:
  explicit Expr(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}
  std::vector<Node> nodes_;
};

/// Number of operator and operand nodes.
inline std::size_t length(const Expr& e) noexcept { return e.size(); }

/// Hash of tree shape and leaf labels; stable across runs and platforms.
std::uint64_t structural_hash(const Expr& e) noexcept;
std::uint64_t structural_hash(std::span<const Node> nodes) noexcept;

/// Total order on preorder node sequences: op kinds first, then variable
/// indices and literal values, position by position. Parameter labels are
/// ignored when `ignore_param_labels` is set.
std::strong_ordering compare_preorder(std::span<const Node> a, std::span<const Node> b,
                                      bool ignore_param_labels = false) noexcept;

/// Infix rendering: inv(a) as "1.0 / a", powabs(a, b) as "|a| ^ b".
std::string render(const Expr& e);
/// Rendering with custom variable names (used for rule patterns).
std::string render(const Expr& e, std::span<const std::string> var_names);

/// Parses the infix syntax produced by render(), plus inv(..), abs(..),
/// powabs(a, b) call syntax and bare "a ^ b" as powabs. Throws ParseError.
Expr parse(std::string_view text);

// Builders.
inline Expr x(std::uint32_t index = 0) { return Expr::variable(index); }
inline Expr p(std::uint32_t index) { return Expr::parameter(index); }
inline Expr lit(double value) { return Expr::constant(value); }
inline Expr inv(const Expr& a) { return Expr::unary(Op::Inv, a); }
inline Expr neg(const Expr& a) { return Expr::unary(Op::Neg, a); }
inline Expr abs(const Expr& a) { return Expr::unary(Op::Abs, a); }
inline Expr powabs(const Expr& a, const Expr& b) { return Expr::binary(Op::PowAbs, a, b); }
inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }

}  // namespace esr
