#pragma once

// Expression language for matrix-valued functions of named real variables.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            right-associative
//   primary := number | 'pi' | var | func '(' expr ')' | '(' expr ')'
//   func    := sin cos tan exp ln sqrt abs
//
// Unary minus binds looser than '^', so -a^2 = -(a^2).

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "icf/errors.hpp"
#include "icf/functional_builder.hpp"

namespace icf::expr {

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected)
      : Error("parse error at position " + std::to_string(position) + ": expected " + expected),
        position_(position), expected_(std::move(expected)) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name) : Error("unknown identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  DomainError(std::string op, std::vector<double> operands);
  const std::string& op() const noexcept { return op_; }
  const std::vector<double>& operands() const noexcept { return operands_; }

 private:
  std::string op_;
  std::vector<double> operands_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name) : Error("unbound variable '" + name + "'") {}
};

enum class Func { sin, cos, tan, exp, ln, sqrt, abs };
enum class BinOp { add, sub, mul, div, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
  bool operator==(const Number&) const = default;
};
struct Pi {
  bool operator==(const Pi&) const = default;
};
struct Variable {
  std::size_t index;  // position in the declared variable list
  std::string name;
  bool operator==(const Variable&) const = default;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinOp op;
  NodePtr lhs, rhs;
};
struct Call {
  Func func;
  NodePtr arg;
};

struct Node {
  std::variant<Number, Pi, Variable, Negate, Binary, Call> v;
};

// Immutable expression tree over a fixed variable list.
class Expr {
 public:
  Expr(NodePtr root, std::vector<std::string> vars) : root_(std::move(root)), vars_(std::move(vars)) {}

  const Node& root() const { return *root_; }
  const std::vector<std::string>& vars() const noexcept { return vars_; }

  // Positional binding: values[i] is the value of vars()[i].
  double eval(std::span<const double> values) const;
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
  std::vector<std::string> vars_;
};

bool operator==(const Node& a, const Node& b);

Expr parse(std::string_view src, const std::vector<std::string>& vars);

// Throws UnboundVariable if a referenced variable is missing from env.
double eval_expr(const Expr& e, const std::map<std::string, double>& env);

struct MatrixExpr {
  std::size_t m = 0;
  std::vector<Expr> entries;  // row-major, m*m
  std::vector<std::string> vars;
};

MatrixExpr parse_matrix(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& vars);

// Entry domain errors are rethrown as DomainError naming the (i, j) entry.
MatrixFunction to_matrix_function(const MatrixExpr& me);

}  // namespace icf::expr
