#include "dots/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>

#include "dots/error.hpp"

namespace dots {

struct Expr::Node {
  Op op;
  double value = 0.0;
  std::string name;
  std::vector<Expr> args;
};

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::non_finite_value, "non-finite constant");
  return Expr(std::make_shared<const Node>(Node{Op::constant, value, {}, {}}));
}

Expr Expr::variable(std::string name) {
  return Expr(std::make_shared<const Node>(Node{Op::variable, 0.0, std::move(name), {}}));
}

Expr Expr::unary(Op op, Expr arg) {
  return Expr(std::make_shared<const Node>(Node{op, 0.0, {}, {std::move(arg)}}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Node{op, 0.0, {}, {std::move(lhs), std::move(rhs)}}));
}

Expr::Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
const std::string& Expr::name() const noexcept { return node_->name; }
std::size_t Expr::arity() const noexcept { return node_->args.size(); }
const Expr& Expr::arg(std::size_t k) const { return node_->args.at(k); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.arity() != b.arity()) return false;
  if (a.op() == Expr::Op::constant) return a.value() == b.value();
  if (a.op() == Expr::Op::variable) return a.name() == b.name();
  for (std::size_t k = 0; k < a.arity(); ++k) {
    if (!(a.arg(k) == b.arg(k))) return false;
  }
  return true;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Op::add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Op::sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Op::mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Op::div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::unary(Expr::Op::neg, std::move(a)); }

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    auto e = expr();
    skip();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::syntax_error,
         "column " + std::to_string(pos_ + 1) + ": " + what + " in '" + std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  bool at_number() {
    skip();
    return pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
  }

  double number() {
    skip();
    std::size_t end = pos_;
    while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) ++end;
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
      if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
        end = k;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, v);
    if (ec != std::errc() || ptr != text_.data() + end) error("malformed number");
    pos_ = end;
    return v;
  }

  Expr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = lhs + term();
      } else if (eat('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    auto lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = lhs * unary();
      } else if (eat('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (eat('-')) {
      if (at_number()) {
        auto save = pos_;
        double v = number();
        skip();
        if (pos_ >= text_.size() || text_[pos_] != '^') return Expr::constant(-v);
        pos_ = save;
      }
      return -unary();
    }
    return power();
  }

  Expr power() {
    auto base = primary();
    if (eat('^')) return Expr::binary(Expr::Op::pow, std::move(base), unary());
    return base;
  }

  Expr primary() {
    if (at_number()) return Expr::constant(number());
    if (eat('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    skip();
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      std::size_t end = pos_;
      while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_' ||
                                    text_[end] == '.')) {
        ++end;
      }
      std::string ident(text_.substr(pos_, end - pos_));
      pos_ = end;
      skip();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        ++pos_;
        Expr::Op op;
        if (ident == "sin") {
          op = Expr::Op::sin;
        } else if (ident == "cos") {
          op = Expr::Op::cos;
        } else if (ident == "exp") {
          op = Expr::Op::exp;
        } else if (ident == "pow") {
          auto a = expr();
          expect(',');
          auto b = expr();
          expect(')');
          return Expr::binary(Expr::Op::pow, std::move(a), std::move(b));
        } else {
          error("unknown function '" + ident + "'");
        }
        auto a = expr();
        expect(')');
        return Expr::unary(op, std::move(a));
      }
      return Expr::variable(std::move(ident));
    }
    if (pos_ >= text_.size()) error("unexpected end of expression");
    error("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.op()) {
    case Expr::Op::add:
    case Expr::Op::sub: return 1;
    case Expr::Op::mul:
    case Expr::Op::div: return 2;
    case Expr::Op::neg: return 3;
    case Expr::Op::pow: return 4;
    case Expr::Op::constant: return e.value() < 0 || std::signbit(e.value()) ? 3 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void render(const Expr& e, std::string& out);

void render_at(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    render(e, out);
    out += ')';
  } else {
    render(e, out);
  }
}

void render(const Expr& e, std::string& out) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::constant: out += format_number(e.value()); return;
    case Op::variable: out += e.name(); return;
    case Op::neg:
      out += '-';
      // A literal right after '-' would read back as a negative constant.
      if (e.arg(0).op() == Op::constant) {
        out += '(';
        render(e.arg(0), out);
        out += ')';
      } else {
        render_at(e.arg(0), 3, out);
      }
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      const int p = precedence(e);
      render_at(e.arg(0), p, out);
      out += e.op() == Op::add ? " + " : e.op() == Op::sub ? " - " : e.op() == Op::mul ? " * " : " / ";
      render_at(e.arg(1), p + 1, out);
      return;
    }
    case Op::pow:
      render_at(e.arg(0), 5, out);
      out += '^';
      render_at(e.arg(1), 3, out);
      return;
    case Op::sin:
    case Op::cos:
    case Op::exp:
      out += e.op() == Op::sin ? "sin(" : e.op() == Op::cos ? "cos(" : "exp(";
      render(e.arg(0), out);
      out += ')';
      return;
  }
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) {
  std::string out;
  render(e, out);
  return out;
}

double eval(const Expr& e, const Env& env) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::constant: return e.value();
    case Op::variable: {
      auto it = env.find(e.name());
      if (it == env.end()) fail(ErrorCode::unbound_variable, "variable '" + e.name() + "' is unbound");
      return it->second;
    }
    case Op::neg: return -eval(e.arg(0), env);
    case Op::add: return eval(e.arg(0), env) + eval(e.arg(1), env);
    case Op::sub: return eval(e.arg(0), env) - eval(e.arg(1), env);
    case Op::mul: return eval(e.arg(0), env) * eval(e.arg(1), env);
    case Op::div: {
      const double den = eval(e.arg(1), env);
      if (den == 0.0) {
        fail(ErrorCode::division_by_zero, "division by zero: '" + to_string(e.arg(1)) + "' evaluates to 0");
      }
      return eval(e.arg(0), env) / den;
    }
    case Op::pow: return std::pow(eval(e.arg(0), env), eval(e.arg(1), env));
    case Op::sin: return std::sin(eval(e.arg(0), env));
    case Op::cos: return std::cos(eval(e.arg(0), env));
    case Op::exp: return std::exp(eval(e.arg(0), env));
  }
  return 0.0;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  switch (e.op()) {
    case Expr::Op::constant: return e;
    case Expr::Op::variable: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    default: break;
  }
  if (e.arity() == 1) return Expr::unary(e.op(), substitute(e.arg(0), bindings));
  return Expr::binary(e.op(), substitute(e.arg(0), bindings), substitute(e.arg(1), bindings));
}

namespace {
void collect(const Expr& e, std::set<std::string>& out) {
  if (e.op() == Expr::Op::variable) {
    out.insert(e.name());
    return;
  }
  for (std::size_t k = 0; k < e.arity(); ++k) collect(e.arg(k), out);
}
}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

}  // namespace dots
