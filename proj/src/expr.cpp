#include "statlab/expr.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include "statlab/error.hpp"

namespace statlab::expr {

struct Expr::Node {
  Op op = Op::Literal;
  double value = 0.0;
  std::uint32_t index = 0;
  std::uint32_t deps = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

const NodePtr& zero_node() {
  static const NodePtr node = std::make_shared<const Expr::Node>();
  return node;
}

bool is_unary_function(Op op) {
  switch (op) {
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
    case Op::Tanh:
      return true;
    default:
      return false;
  }
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Tanh: return "tanh";
    default: return "?";
  }
}

[[noreturn]] void domain_error(const char* what) {
  throw Error(ErrorCode::Domain, std::string("domain error: ") + what);
}

// Applies one operator to already evaluated operands. Returns nullopt for
// arguments outside the operator's domain.
std::optional<double> apply_op(Op op, double x, double y) {
  double r = 0.0;
  switch (op) {
    case Op::Add: r = x + y; break;
    case Op::Sub: r = x - y; break;
    case Op::Mul: r = x * y; break;
    case Op::Div:
      if (y == 0.0) return std::nullopt;
      r = x / y;
      break;
    case Op::Pow: r = std::pow(x, y); break;
    case Op::Neg: r = -x; break;
    case Op::Sin: r = std::sin(x); break;
    case Op::Cos: r = std::cos(x); break;
    case Op::Exp: r = std::exp(x); break;
    case Op::Log:
      if (!(x > 0.0)) return std::nullopt;
      r = std::log(x);
      break;
    case Op::Sqrt:
      if (x < 0.0) return std::nullopt;
      r = std::sqrt(x);
      break;
    case Op::Tanh: r = std::tanh(x); break;
    default: return std::nullopt;
  }
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

const char* domain_message(Op op) {
  switch (op) {
    case Op::Div: return "division by zero";
    case Op::Log: return "log of a non-positive argument";
    case Op::Sqrt: return "sqrt of a negative argument";
    case Op::Pow: return "power is undefined or overflows";
    default: return "non-finite result";
  }
}

double eval_node(const Expr::Node& n, std::span<const double> p) {
  switch (n.op) {
    case Op::Literal:
      return n.value;
    case Op::Coord:
      return p[n.index];
    default:
      break;
  }
  const double x = eval_node(*n.a, p);
  const double y = n.b ? eval_node(*n.b, p) : 0.0;
  const auto r = apply_op(n.op, x, y);
  if (!r) domain_error(domain_message(n.op));
  return *r;
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

int precedence_of(const Expr::Node& n) {
  if (n.op == Op::Literal && (n.value < 0.0 || std::signbit(n.value))) return 3;
  return precedence(n.op);
}

void print_literal(double v, std::string& out) {
  std::array<char, 40> buf{};
  const bool negative = std::signbit(v);
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), negative ? -v : v);
  const std::string digits(buf.data(), res.ptr);
  if (negative) {
    out += "(-" + digits + ")";
  } else {
    out += digits;
  }
}

void print_node(const Expr::Node& n, std::string& out);

void print_wrapped(const Expr::Node& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_node(n, out);
  if (wrap) out += ')';
}

void print_node(const Expr::Node& n, std::string& out) {
  switch (n.op) {
    case Op::Literal:
      print_literal(n.value, out);
      return;
    case Op::Coord:
      out += 'x';
      out += std::to_string(n.index + 1);
      return;
    case Op::Neg:
      out += '-';
      print_wrapped(*n.a, precedence_of(*n.a) < 3, out);
      return;
    case Op::Pow:
      print_wrapped(*n.a, precedence_of(*n.a) <= 4, out);
      out += '^';
      print_wrapped(*n.b, precedence_of(*n.b) < 3, out);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(n.op);
      print_wrapped(*n.a, precedence_of(*n.a) < p, out);
      out += n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
      print_wrapped(*n.b, precedence_of(*n.b) <= p, out);
      return;
    }
    default:
      out += function_name(n.op);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const Expr::Node* a, const Expr::Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::Literal:
      return std::bit_cast<std::uint64_t>(a->value) == std::bit_cast<std::uint64_t>(b->value);
    case Op::Coord:
      return a->index == b->index;
    default:
      return equal_nodes(a->a.get(), b->a.get()) && equal_nodes(a->b.get(), b->b.get());
  }
}

std::size_t count_nodes(const Expr::Node* n) {
  if (!n) return 0;
  return 1 + count_nodes(n->a.get()) + count_nodes(n->b.get());
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr Expr::literal(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::Domain, "literal must be finite");
  auto n = std::make_shared<Node>();
  n->op = Op::Literal;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::coord(std::size_t index) {
  if (index >= kMaxCoordinates) {
    throw Error(ErrorCode::CoordinateOutOfRange,
                "coordinate index " + std::to_string(index + 1) + " exceeds the supported maximum");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Coord;
  n->index = static_cast<std::uint32_t>(index);
  n->deps = 1U << index;
  return Expr(std::move(n));
}

Expr Expr::make(Op op, Expr a, Expr b) {
  const bool unary = op == Op::Neg || is_unary_function(op);
  if (a.is_literal() && (unary || b.is_literal())) {
    if (const auto folded = apply_op(op, a.value(), unary ? 0.0 : b.value())) {
      return literal(*folded);
    }
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a.node_;
  if (!unary) n->b = b.node_;
  n->deps = a.dependencies() | (unary ? 0U : b.dependencies());
  return Expr(std::move(n));
}

Expr Expr::apply(Op function, const Expr& argument) {
  if (!is_unary_function(function)) {
    throw Error(ErrorCode::Syntax, "not a unary function");
  }
  return make(function, argument, Expr());
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
std::size_t Expr::index() const noexcept { return node_->index; }
Expr Expr::lhs() const { return node_->a ? Expr(node_->a) : Expr(); }
Expr Expr::rhs() const { return node_->b ? Expr(node_->b) : Expr(); }
std::uint32_t Expr::dependencies() const noexcept { return node_->deps; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Op::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::make(Op::Neg, a, Expr()); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr::make(Op::Pow, base, exponent); }

double eval(const Expr& e, std::span<const double> point) {
  const std::uint32_t deps = e.dependencies();
  if (point.size() < kMaxCoordinates && (deps >> point.size()) != 0) {
    throw Error(ErrorCode::CoordinateOutOfRange,
                "expression references a coordinate beyond the point dimension");
  }
  return eval_node(*e.node_, point);
}

namespace {

// Chain-rule helper: omits the factor when the inner derivative is exactly 1.
Expr chain(const Expr& outer, const Expr& inner) {
  if (inner.is_literal(1.0)) return outer;
  return outer * inner;
}

}  // namespace

Expr differentiate(const Expr& e, std::size_t i) {
  if (!e.depends_on(i)) return Expr::literal(0.0);
  switch (e.op()) {
    case Op::Coord:
      return Expr::literal(1.0);
    case Op::Add:
    case Op::Sub: {
      const Expr a = e.lhs();
      const Expr b = e.rhs();
      if (!b.depends_on(i)) return differentiate(a, i);
      const Expr db = differentiate(b, i);
      if (!a.depends_on(i)) return e.op() == Op::Add ? db : -db;
      const Expr da = differentiate(a, i);
      return e.op() == Op::Add ? da + db : da - db;
    }
    case Op::Mul: {
      const Expr a = e.lhs();
      const Expr b = e.rhs();
      if (!b.depends_on(i)) return chain(b, differentiate(a, i));
      if (!a.depends_on(i)) return chain(a, differentiate(b, i));
      return chain(b, differentiate(a, i)) + chain(a, differentiate(b, i));
    }
    case Op::Div: {
      const Expr a = e.lhs();
      const Expr b = e.rhs();
      if (!b.depends_on(i)) return differentiate(a, i) / b;
      const Expr num = a.depends_on(i) ? chain(b, differentiate(a, i)) - chain(a, differentiate(b, i))
                                       : -chain(a, differentiate(b, i));
      return num / (b * b);
    }
    case Op::Pow: {
      const Expr a = e.lhs();
      const Expr b = e.rhs();
      if (b.is_literal(0.0)) return Expr::literal(0.0);
      if (b.is_literal(1.0)) return differentiate(a, i);
      if (!b.depends_on(i)) {
        return chain(b * pow(a, b - Expr::literal(1.0)), differentiate(a, i));
      }
      const Expr log_a = Expr::apply(Op::Log, a);
      if (!a.depends_on(i)) return chain(e * log_a, differentiate(b, i));
      return e * (chain(log_a, differentiate(b, i)) + chain(b / a, differentiate(a, i)));
    }
    case Op::Neg:
      return -differentiate(e.lhs(), i);
    case Op::Sin:
      return chain(Expr::apply(Op::Cos, e.lhs()), differentiate(e.lhs(), i));
    case Op::Cos:
      return -chain(Expr::apply(Op::Sin, e.lhs()), differentiate(e.lhs(), i));
    case Op::Exp:
      return chain(e, differentiate(e.lhs(), i));
    case Op::Log:
      return differentiate(e.lhs(), i) / e.lhs();
    case Op::Sqrt:
      return differentiate(e.lhs(), i) / (Expr::literal(2.0) * e);
    case Op::Tanh:
      return chain(Expr::literal(1.0) - e * e, differentiate(e.lhs(), i));
    case Op::Literal:
      break;
  }
  return Expr::literal(0.0);
}

std::string to_string(const Expr& e) {
  std::string out;
  print_node(*e.node_, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return equal_nodes(a.node_.get(), b.node_.get());
}

std::size_t node_count(const Expr& e) { return count_nodes(e.node_.get()); }

}  // namespace statlab::expr
