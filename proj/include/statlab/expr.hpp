#pragma once

// Arithmetic expressions over chart coordinates with exact symbolic
// differentiation. Coordinates are written x1..xn in source text and are
// addressed 0-based through the C++ API.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace statlab::expr {

enum class Op : std::uint8_t {
  Literal,
  Coord,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Tanh,
};

/// Largest chart dimension an expression can reference.
inline constexpr std::size_t kMaxCoordinates = 32;

/// Immutable expression tree. Copies share nodes.
class Expr {
 public:
  /// The literal 0.
  Expr();

  static Expr literal(double value);
  static Expr coord(std::size_t index);
  static Expr apply(Op function, const Expr& argument);

  Op op() const noexcept;
  double value() const noexcept;       // Literal only
  std::size_t index() const noexcept;  // Coord only
  Expr lhs() const;  // binary ops, or the argument of unary ops
  Expr rhs() const;  // binary ops

  bool is_literal() const noexcept { return op() == Op::Literal; }
  bool is_literal(double v) const noexcept { return is_literal() && value() == v; }

  /// Bit i set iff the expression references coordinate i.
  std::uint32_t dependencies() const noexcept;
  bool depends_on(std::size_t i) const noexcept { return (dependencies() >> i) & 1U; }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);

  struct Node;

 private:
  friend double eval(const Expr& e, std::span<const double> point);
  friend std::string to_string(const Expr& e);
  friend bool structurally_equal(const Expr& a, const Expr& b);
  friend std::size_t node_count(const Expr& e);

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, Expr a, Expr b);

  std::shared_ptr<const Node> node_;
};

/// Parses `source` with x1..x`dim` in scope. Precedence from tightest:
/// `^` (right associative), unary minus, `* /`, `+ -`.
/// Throws ParseError carrying the byte offset of the failure.
Expr parse(std::string_view source, std::size_t dim);

/// Evaluates at `point`; throws Error(Domain) for log/sqrt of a negative
/// argument, division by zero, or any other non-finite intermediate.
double eval(const Expr& e, std::span<const double> point);

/// Exact partial derivative with respect to coordinate `i` (0-based).
Expr differentiate(const Expr& e, std::size_t i);

/// Text that parses back to a structurally identical tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Number of nodes in the tree, counting shared subtrees once per use.
std::size_t node_count(const Expr& e);

}  // namespace statlab::expr
