#include "icf/exprlang.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace icf::expr {

namespace {

struct FuncName {
  std::string_view name;
  Func func;
};

constexpr std::array<FuncName, 7> kFuncs{{{"sin", Func::sin},
                                          {"cos", Func::cos},
                                          {"tan", Func::tan},
                                          {"exp", Func::exp},
                                          {"ln", Func::ln},
                                          {"sqrt", Func::sqrt},
                                          {"abs", Func::abs}}};

std::string_view func_name(Func f) {
  for (const auto& fn : kFuncs)
    if (fn.func == f) return fn.name;
  return "?";
}

char op_char(BinOp op) {
  switch (op) {
    case BinOp::add: return '+';
    case BinOp::sub: return '-';
    case BinOp::mul: return '*';
    case BinOp::div: return '/';
    case BinOp::pow: return '^';
  }
  return '?';
}

NodePtr make(auto v) { return std::make_shared<const Node>(Node{std::move(v)}); }

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse_all() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_, "operator or end of input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(pos_, std::string("'") + c + "'");
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Binary{BinOp::add, lhs, term()});
      else if (accept('-'))
        lhs = make(Binary{BinOp::sub, lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Binary{BinOp::mul, lhs, unary()});
      else if (accept('/'))
        lhs = make(Binary{BinOp::div, lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Negate{unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Binary{BinOp::pow, base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "operand");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(pos_, "operand");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError(start, "number");
    return make(Number{value});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return make(Variable{i, name});
    if (name == "pi") return make(Pi{});
    for (const auto& fn : kFuncs)
      if (fn.name == name) {
        expect('(');
        NodePtr arg = expression();
        expect(')');
        return make(Call{fn.func, arg});
      }
    throw UnknownIdentifier(name);
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double checked(double r, std::string_view op, std::vector<double> operands) {
  if (!std::isfinite(r)) throw DomainError(std::string(op), std::move(operands));
  return r;
}

double eval_node(const Node& n, std::span<const double> values) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Pi>) {
          return std::numbers::pi;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return values[x.index];
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_node(*x.operand, values);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const double a = eval_node(*x.lhs, values);
          const double b = eval_node(*x.rhs, values);
          switch (x.op) {
            case BinOp::add: return checked(a + b, "+", {a, b});
            case BinOp::sub: return checked(a - b, "-", {a, b});
            case BinOp::mul: return checked(a * b, "*", {a, b});
            case BinOp::div:
              if (b == 0.0) throw DomainError("/", {a, b});
              return checked(a / b, "/", {a, b});
            case BinOp::pow:
              if (a == 0.0 && b < 0.0) throw DomainError("^", {a, b});
              return checked(std::pow(a, b), "^", {a, b});
          }
          return 0.0;
        } else {
          const double a = eval_node(*x.arg, values);
          const std::string op(func_name(x.func));
          switch (x.func) {
            case Func::sin: return checked(std::sin(a), op, {a});
            case Func::cos: return checked(std::cos(a), op, {a});
            case Func::tan: return checked(std::tan(a), op, {a});
            case Func::exp: return checked(std::exp(a), op, {a});
            case Func::ln:
              if (!(a > 0.0)) throw DomainError(op, {a});
              return checked(std::log(a), op, {a});
            case Func::sqrt:
              if (a < 0.0) throw DomainError(op, {a});
              return checked(std::sqrt(a), op, {a});
            case Func::abs: return checked(std::abs(a), op, {a});
          }
          return 0.0;
        }
      },
      n.v);
}

void print_node(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          std::array<char, 32> buf{};
          auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x.value);
          out.append(buf.data(), ptr);
        } else if constexpr (std::is_same_v<T, Pi>) {
          out += "pi";
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "(-";
          print_node(*x.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Binary>) {
          out += '(';
          print_node(*x.lhs, out);
          out += ' ';
          out += op_char(x.op);
          out += ' ';
          print_node(*x.rhs, out);
          out += ')';
        } else {
          out += func_name(x.func);
          out += '(';
          print_node(*x.arg, out);
          out += ')';
        }
      },
      n.v);
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

}  // namespace

DomainError::DomainError(std::string op, std::vector<double> operands)
    : Error("domain error in '" + op + "' with operands (" + join(operands) + ")"),
      op_(std::move(op)), operands_(std::move(operands)) {}

bool operator==(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, Negate>) {
          return *x.operand == *y.operand;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        } else if constexpr (std::is_same_v<T, Call>) {
          return x.func == y.func && *x.arg == *y.arg;
        } else {
          return x == y;
        }
      },
      a.v);
}

bool operator==(const Expr& a, const Expr& b) { return a.vars_ == b.vars_ && *a.root_ == *b.root_; }

double Expr::eval(std::span<const double> values) const {
  if (values.size() < vars_.size()) throw UnboundVariable(vars_[values.size()]);
  return eval_node(*root_, values);
}

std::string Expr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

Expr parse(std::string_view src, const std::vector<std::string>& vars) {
  Parser p(src, vars);
  return Expr(p.parse_all(), vars);
}

double eval_expr(const Expr& e, const std::map<std::string, double>& env) {
  std::vector<double> values;
  values.reserve(e.vars().size());
  // Only variables the tree references must be bound.
  std::vector<bool> used(e.vars().size(), false);
  auto mark = [&](auto&& self, const Node& n) -> void {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Variable>) {
            used[x.index] = true;
          } else if constexpr (std::is_same_v<T, Negate>) {
            self(self, *x.operand);
          } else if constexpr (std::is_same_v<T, Binary>) {
            self(self, *x.lhs);
            self(self, *x.rhs);
          } else if constexpr (std::is_same_v<T, Call>) {
            self(self, *x.arg);
          }
        },
        n.v);
  };
  mark(mark, e.root());
  for (std::size_t i = 0; i < e.vars().size(); ++i) {
    auto it = env.find(e.vars()[i]);
    if (it == env.end()) {
      if (used[i]) throw UnboundVariable(e.vars()[i]);
      values.push_back(0.0);
    } else {
      values.push_back(it->second);
    }
  }
  return e.eval(values);
}

MatrixExpr parse_matrix(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& vars) {
  MatrixExpr me;
  me.m = rows.size();
  me.vars = vars;
  if (me.m == 0) throw ValidationError("matrix expression has no rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != me.m)
      throw ValidationError("matrix expression row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " entries, expected " + std::to_string(me.m));
    for (const auto& src : rows[i]) me.entries.push_back(parse(src, vars));
  }
  return me;
}

MatrixFunction to_matrix_function(const MatrixExpr& me) {
  auto eval = [me](std::span<const double> p) {
    if (p.size() != me.vars.size()) throw DimensionMismatch(p.size(), me.vars.size());
    std::vector<Complex> vals(me.m * me.m);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      try {
        vals[k] = {me.entries[k].eval(p), 0.0};
      } catch (const DomainError& e) {
        throw DomainError(e.op() + " in entry (" + std::to_string(k / me.m) + "," + std::to_string(k % me.m) + ")",
                          e.operands());
      }
    }
    return CMatrix(me.m, std::move(vals));
  };
  return {me.vars.size(), me.m, std::move(eval), {}};
}

}  // namespace icf::expr
