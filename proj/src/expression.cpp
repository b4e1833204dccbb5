#include "pmfix/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "format.hpp"
#include "pmfix/error.hpp"

namespace pmfix {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
  double number = 0.0;
};

struct FunctionInfo {
  std::string_view name;
  Expression::Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"exp", Expression::Op::Exp, 1},   {"log", Expression::Op::Log, 1},
    {"sqrt", Expression::Op::Sqrt, 1}, {"abs", Expression::Op::Abs, 1},
    {"min", Expression::Op::Min, 2},   {"max", Expression::Op::Max, 2},
    {"pow", Expression::Op::Pow, 2},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

[[noreturn]] void fail(std::size_t pos, std::string expected, const std::string& msg) {
  throw SyntaxError(pos, expected, "syntax error at offset " + std::to_string(pos) + ": " + msg +
                                       " (expected " + expected + ")");
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, start, {}};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_')) {
        ++pos_;
      }
      return {Tok::Ident, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::Plus, start, src_.substr(start, 1)};
      case '-': return {Tok::Minus, start, src_.substr(start, 1)};
      case '*': return {Tok::Star, start, src_.substr(start, 1)};
      case '/': return {Tok::Slash, start, src_.substr(start, 1)};
      case '^': return {Tok::Caret, start, src_.substr(start, 1)};
      case '(': return {Tok::LParen, start, src_.substr(start, 1)};
      case ')': return {Tok::RParen, start, src_.substr(start, 1)};
      case ',': return {Tok::Comma, start, src_.substr(start, 1)};
      default: break;
    }
    fail(start, "operand or operator", std::string("unexpected character '") + c + "'");
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail(start, "digit", "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail(pos_, "exponent digits", "malformed exponent");
    }
    const std::string text(src_.substr(start, pos_ - start));
    const double value = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(value)) fail(start, "finite number", "literal out of range");
    return {Tok::Number, start, src_.substr(start, pos_ - start), value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, std::string_view variable)
      : lexer_(src), variable_(variable) {
    advance();
  }

  Expression run(std::string_view src) {
    Expression out;
    out.variable_ = std::string(variable_);
    out.source_ = std::string(src);
    nodes_ = &out.nodes_;
    out.root_ = expr();
    if (tok_.kind != Tok::End) fail(tok_.pos, "operator or end of input", "trailing input");
    return out;
  }

 private:
  using Op = Expression::Op;

  void advance() { tok_ = lexer_.next(); }

  std::int32_t add(Op op, double value = 0.0, std::int32_t lhs = -1, std::int32_t rhs = -1) {
    nodes_->push_back({op, value, lhs, rhs});
    return static_cast<std::int32_t>(nodes_->size() - 1);
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(tok_.pos, what, "unexpected token");
    advance();
  }

  std::int32_t expr() {
    std::int32_t lhs = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const Op op = tok_.kind == Tok::Plus ? Op::Add : Op::Sub;
      advance();
      lhs = add(op, 0.0, lhs, term());
    }
    return lhs;
  }

  std::int32_t term() {
    std::int32_t lhs = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const Op op = tok_.kind == Tok::Star ? Op::Mul : Op::Div;
      advance();
      lhs = add(op, 0.0, lhs, unary());
    }
    return lhs;
  }

  std::int32_t unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return add(Op::Neg, 0.0, unary());
    }
    return power();
  }

  std::int32_t power() {
    const std::int32_t base = primary();
    if (tok_.kind == Tok::Caret) {
      advance();
      return add(Op::Pow, 0.0, base, unary());
    }
    return base;
  }

  std::int32_t primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Number:
        advance();
        return add(Op::Number, t.number);
      case Tok::LParen: {
        advance();
        const std::int32_t inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        advance();
        if (t.text == variable_) return add(Op::Variable);
        const FunctionInfo* f = find_function(t.text);
        if (f == nullptr) {
          fail(t.pos, "variable '" + std::string(variable_) + "' or function name",
               "unknown identifier '" + std::string(t.text) + "'");
        }
        expect(Tok::LParen, "'('");
        const std::int32_t a = expr();
        std::int32_t b = -1;
        if (f->arity == 2) {
          expect(Tok::Comma, "','");
          b = expr();
        }
        expect(Tok::RParen, "')'");
        return add(f->op, 0.0, a, b);
      }
      default:
        fail(t.pos, "number, variable, function or '('", "missing operand");
    }
  }

  Lexer lexer_;
  std::string_view variable_;
  Token tok_{Tok::End, 0, {}};
  std::vector<Expression::Node>* nodes_ = nullptr;
};

Expression Expression::parse(std::string_view source, std::string_view variable) {
  ExpressionParser parser(source, variable);
  return parser.run(source);
}

long double Expression::evaluate(long double at) const {
  const long double v = eval_node(root_, at);
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::ExpressionDomainError,
                "expression '" + source_ + "' is not finite at " + variable_ + "=" +
                    std::to_string(static_cast<double>(at)));
  }
  return v;
}

long double Expression::eval_node(std::int32_t index, long double at) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  auto domain = [&](const char* what) -> long double {
    throw Error(ErrorKind::ExpressionDomainError,
                std::string(what) + " in '" + source_ + "' at " + variable_ + "=" +
                    std::to_string(static_cast<double>(at)));
  };
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Variable: return at;
    case Op::Neg: return -eval_node(n.lhs, at);
    case Op::Add: return eval_node(n.lhs, at) + eval_node(n.rhs, at);
    case Op::Sub: return eval_node(n.lhs, at) - eval_node(n.rhs, at);
    case Op::Mul: return eval_node(n.lhs, at) * eval_node(n.rhs, at);
    case Op::Div: {
      const long double den = eval_node(n.rhs, at);
      if (den == 0.0L) return domain("division by zero");
      return eval_node(n.lhs, at) / den;
    }
    case Op::Pow: {
      const long double base = eval_node(n.lhs, at);
      const long double ex = eval_node(n.rhs, at);
      if (base < 0.0L && std::nearbyint(ex) != ex) return domain("fractional power of negative");
      if (base == 0.0L && ex < 0.0L) return domain("negative power of zero");
      return std::pow(base, ex);
    }
    case Op::Exp: return std::exp(eval_node(n.lhs, at));
    case Op::Log: {
      const long double a = eval_node(n.lhs, at);
      if (a <= 0.0L) return domain("log of non-positive");
      return std::log(a);
    }
    case Op::Sqrt: {
      const long double a = eval_node(n.lhs, at);
      if (a < 0.0L) return domain("sqrt of negative");
      return std::sqrt(a);
    }
    case Op::Abs: return std::fabs(eval_node(n.lhs, at));
    case Op::Min: return std::fmin(eval_node(n.lhs, at), eval_node(n.rhs, at));
    case Op::Max: return std::fmax(eval_node(n.lhs, at), eval_node(n.rhs, at));
  }
  return domain("corrupt expression");
}

std::string Expression::render() const {
  std::string out;
  render_node(root_, out);
  return out;
}

void Expression::render_node(std::int32_t index, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  auto binary = [&](const char* op) {
    out += '(';
    render_node(n.lhs, out);
    out += op;
    render_node(n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    render_node(n.lhs, out);
    if (n.rhs >= 0) {
      out += ", ";
      render_node(n.rhs, out);
    }
    out += ')';
  };
  switch (n.op) {
    case Op::Number:
      out += format_real(n.value);
      return;
    case Op::Variable: out += variable_; return;
    case Op::Neg:
      out += "(-";
      render_node(n.lhs, out);
      out += ')';
      return;
    case Op::Add: binary(" + "); return;
    case Op::Sub: binary(" - "); return;
    case Op::Mul: binary(" * "); return;
    case Op::Div: binary(" / "); return;
    case Op::Pow: binary("^"); return;
    case Op::Exp: call("exp"); return;
    case Op::Log: call("log"); return;
    case Op::Sqrt: call("sqrt"); return;
    case Op::Abs: call("abs"); return;
    case Op::Min: call("min"); return;
    case Op::Max: call("max"); return;
  }
}

}  // namespace pmfix
