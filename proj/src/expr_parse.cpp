#include <cctype>
#include <charconv>
#include <string>

#include "statlab/error.hpp"
#include "statlab/expr.hpp"

namespace statlab::expr {
namespace {

struct FunctionEntry {
  std::string_view name;
  Op op;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", Op::Sin}, {"cos", Op::Cos},   {"exp", Op::Exp},
    {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"tanh", Op::Tanh},
};

// Recursive descent over the grammar
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | coordinate | function '(' sum ')' | '(' sum ')'
class Parser {
 public:
  Parser(std::string_view src, std::size_t dim) : src_(src), dim_(dim) {}

  Expr run() {
    Expr e = sum();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(ErrorCode::Syntax, pos_, "syntax error: " + what);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = e + product();
      } else if (accept('-')) {
        e = e - product();
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  Expr number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double v = 0.0;
    const auto res = std::from_chars(first, last, v, std::chars_format::general);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return Expr::literal(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      std::size_t index = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (index < 1 || index > dim_) {
        throw ParseError(ErrorCode::CoordinateOutOfRange, start,
                         "coordinate " + std::string(name) + " out of range for dimension " +
                             std::to_string(dim_));
      }
      return Expr::coord(index - 1);
    }
    for (const auto& f : kFunctions) {
      if (f.name == name) {
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        Expr arg = sum();
        if (!accept(')')) fail("expected ')'");
        return Expr::apply(f.op, arg);
      }
    }
    throw ParseError(ErrorCode::UnknownIdentifier, start,
                     "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, std::size_t dim) {
  if (dim > kMaxCoordinates) {
    throw Error(ErrorCode::CoordinateOutOfRange, "dimension exceeds the supported maximum");
  }
  return Parser(source, dim).run();
}

}  // namespace statlab::expr
