#include "adiabatica/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "adiabatica/error.hpp"

namespace adiabatica {
namespace {

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

template <typename T>
NodePtr make(T value) {
  return std::make_shared<const Node>(Node{std::move(value)});
}

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, comma, end } kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

// Translates U+2212 into '-' while keeping a map back to byte offsets of the source.
struct Source {
  std::string text;
  std::vector<std::size_t> offset;

  explicit Source(std::string_view src) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src.substr(i, 3) == "\xE2\x88\x92") {
        text.push_back('-');
        offset.push_back(i);
        i += 2;
      } else {
        text.push_back(src[i]);
        offset.push_back(i);
      }
    }
    offset.push_back(src.size());
  }
};

std::vector<Token> tokenize(const Source& s) {
  std::vector<Token> out;
  const std::string& src = s.text;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t pos = s.offset[i];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
        ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(src.data() + i, src.data() + j, value);
      if (res.ec != std::errc() || res.ptr != src.data() + j)
        throw ParseError("malformed number '" + src.substr(i, j - i) + "'", pos);
      out.push_back({Token::Kind::number, pos, src.substr(i, j - i), value});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Token::Kind::ident, pos, src.substr(i, j - i)});
      i = j;
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({Token::Kind::op, pos, std::string(1, c)});
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::lparen, pos, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::Kind::rparen, pos, ")"});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::Kind::comma, pos, ","});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({Token::Kind::end, s.offset.back(), ""});
  return out;
}

bool lookup_function(std::string_view name, Expr::Function& fn) {
  static constexpr std::pair<std::string_view, Expr::Function> table[] = {
      {"sin", Expr::Function::sin},   {"cos", Expr::Function::cos},
      {"exp", Expr::Function::exp},   {"sqrt", Expr::Function::sqrt},
      {"tanh", Expr::Function::tanh}, {"abs", Expr::Function::abs},
  };
  for (const auto& [n, f] : table) {
    if (n == name) {
      fn = f;
      return true;
    }
  }
  return false;
}

std::string_view function_name(Expr::Function fn) {
  switch (fn) {
    case Expr::Function::sin: return "sin";
    case Expr::Function::cos: return "cos";
    case Expr::Function::exp: return "exp";
    case Expr::Function::sqrt: return "sqrt";
    case Expr::Function::tanh: return "tanh";
    case Expr::Function::abs: return "abs";
  }
  return "?";
}

class Parser {
public:
  Parser(std::vector<Token> tokens, int params) : tokens_(std::move(tokens)), params_(params) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    if (peek().kind != Token::Kind::end)
      throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

private:
  const Token& peek() const { return tokens_[i_]; }
  const Token& next() { return tokens_[i_++]; }
  bool is_op(char c) const { return peek().kind == Token::Kind::op && peek().text[0] == c; }

  NodePtr expr() {
    NodePtr lhs = term();
    while (is_op('+') || is_op('-')) {
      const char op = next().text[0];
      lhs = make(Expr::Binary{op, lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (is_op('*') || is_op('/')) {
      const char op = next().text[0];
      lhs = make(Expr::Binary{op, lhs, factor()});
    }
    return lhs;
  }

  NodePtr factor() {
    if (is_op('-')) {
      next();
      return make(Expr::Negate{factor()});
    }
    NodePtr base = atom();
    if (is_op('^')) {
      next();
      return make(Expr::Binary{'^', base, factor()});
    }
    return base;
  }

  NodePtr atom() {
    const Token& tok = next();
    switch (tok.kind) {
      case Token::Kind::number:
        return make(Expr::Number{tok.number});
      case Token::Kind::lparen: {
        NodePtr inside = expr();
        expect_rparen();
        return inside;
      }
      case Token::Kind::ident:
        return identifier(tok);
      case Token::Kind::end:
        throw ParseError("unexpected end of expression", tok.pos);
      default:
        throw ParseError("unexpected '" + tok.text + "'", tok.pos);
    }
  }

  NodePtr identifier(const Token& tok) {
    Expr::Function fn{};
    if (lookup_function(tok.text, fn)) {
      if (peek().kind != Token::Kind::lparen)
        throw ParseError("expected '(' after function '" + tok.text + "'", peek().pos);
      next();
      if (peek().kind == Token::Kind::rparen)
        throw ParseError("arity error: '" + tok.text + "' takes 1 argument, got 0", peek().pos);
      NodePtr arg = expr();
      if (peek().kind == Token::Kind::comma)
        throw ParseError("arity error: '" + tok.text + "' takes 1 argument", peek().pos);
      expect_rparen();
      return make(Expr::Call{fn, arg});
    }
    if (tok.text == "x") return make(Expr::Variable{Expr::Variable::Kind::x, 0});
    if (tok.text == "t") return make(Expr::Variable{Expr::Variable::Kind::t, 0});
    if (tok.text.size() > 1 && tok.text[0] == 'R') {
      int index = 0;
      const char* first = tok.text.data() + 1;
      const char* last = tok.text.data() + tok.text.size();
      const auto res = std::from_chars(first, last, index);
      if (res.ec == std::errc() && res.ptr == last && index >= 1 && index <= params_ &&
          tok.text[1] != '0')
        return make(Expr::Variable{Expr::Variable::Kind::param, index - 1});
    }
    if (peek().kind == Token::Kind::lparen)
      throw ParseError("unknown function '" + tok.text + "'", tok.pos);
    throw ParseError("unknown identifier '" + tok.text + "'", tok.pos);
  }

  void expect_rparen() {
    if (peek().kind != Token::Kind::rparen)
      throw ParseError("expected ')'", peek().pos);
    next();
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
  int params_;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

struct Evaluator {
  double x;
  std::span<const double> R;
  double t;

  double operator()(const NodePtr& n) const { return std::visit(*this, n->v); }

  double operator()(const Expr::Number& n) const { return n.value; }

  double operator()(const Expr::Variable& v) const {
    switch (v.kind) {
      case Expr::Variable::Kind::x: return x;
      case Expr::Variable::Kind::t: return t;
      case Expr::Variable::Kind::param:
        if (static_cast<std::size_t>(v.index) >= R.size())
          throw EvalError("unbound identifier R" + std::to_string(v.index + 1));
        return R[v.index];
    }
    return 0.0;
  }

  double operator()(const Expr::Negate& n) const { return -(*this)(n.operand); }

  double operator()(const Expr::Binary& b) const {
    const double l = (*this)(b.lhs);
    const double r = (*this)(b.rhs);
    switch (b.op) {
      case '+': return checked(l + r, "addition");
      case '-': return checked(l - r, "subtraction");
      case '*': return checked(l * r, "multiplication");
      case '/':
        if (r == 0.0) throw EvalError("division by zero");
        return checked(l / r, "division");
      case '^': return checked(std::pow(l, r), "power");
    }
    throw EvalError("corrupt operator");
  }

  double operator()(const Expr::Call& c) const {
    const double a = (*this)(c.arg);
    switch (c.fn) {
      case Expr::Function::sin: return checked(std::sin(a), "sin");
      case Expr::Function::cos: return checked(std::cos(a), "cos");
      case Expr::Function::exp: return checked(std::exp(a), "exp");
      case Expr::Function::sqrt: return checked(std::sqrt(a), "sqrt");
      case Expr::Function::tanh: return checked(std::tanh(a), "tanh");
      case Expr::Function::abs: return std::abs(a);
    }
    throw EvalError("corrupt function");
  }
};

void print_node(const NodePtr& n, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expr::Number>) {
          out += fmt::format("{:.17g}", v.value);
        } else if constexpr (std::is_same_v<T, Expr::Variable>) {
          if (v.kind == Expr::Variable::Kind::x) out += 'x';
          else if (v.kind == Expr::Variable::Kind::t) out += 't';
          else out += "R" + std::to_string(v.index + 1);
        } else if constexpr (std::is_same_v<T, Expr::Negate>) {
          out += "(-";
          print_node(v.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          out += '(';
          print_node(v.lhs, out);
          out += v.op;
          print_node(v.rhs, out);
          out += ')';
        } else {
          out += function_name(v.fn);
          out += '(';
          print_node(v.arg, out);
          out += ')';
        }
      },
      n->v);
}

bool equal_nodes(const NodePtr& a, const NodePtr& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& va) {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, Expr::Number>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, Expr::Variable>) {
          return va.kind == vb.kind && va.index == vb.index;
        } else if constexpr (std::is_same_v<T, Expr::Negate>) {
          return equal_nodes(va.operand, vb.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return va.op == vb.op && equal_nodes(va.lhs, vb.lhs) && equal_nodes(va.rhs, vb.rhs);
        } else {
          return va.fn == vb.fn && equal_nodes(va.arg, vb.arg);
        }
      },
      a->v);
}

bool uses_x(const NodePtr& n) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expr::Number>) return false;
        else if constexpr (std::is_same_v<T, Expr::Variable>) return v.kind == Expr::Variable::Kind::x;
        else if constexpr (std::is_same_v<T, Expr::Negate>) return uses_x(v.operand);
        else if constexpr (std::is_same_v<T, Expr::Binary>) return uses_x(v.lhs) || uses_x(v.rhs);
        else return uses_x(v.arg);
      },
      n->v);
}

}  // namespace

Expr Expr::parse(std::string_view src, int params) {
  const Source s(src);
  bool blank = true;
  for (char c : s.text) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw ParseError("empty expression", 0);
  Parser p(tokenize(s), params);
  return Expr(p.parse_all(), std::string(src), params);
}

double Expr::eval(double x, std::span<const double> R, double t) const {
  return Evaluator{x, R, t}(root_);
}

RealField Expr::sample(const SpatialGrid& grid, std::span<const double> R, double t) const {
  RealField out(grid.size());
  for (int j = 0; j < grid.size(); ++j) out[j] = Evaluator{grid.x(j), R, t}(root_);
  return out;
}

std::string Expr::print() const {
  std::string out;
  print_node(root_, out);
  return out;
}

bool Expr::depends_on_x() const { return uses_x(root_); }

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(a.root_, b.root_); }

}  // namespace adiabatica
