#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pkt/errors.hpp"
#include "pkt/jet.hpp"

namespace pkt {

// Closed-form scalar expressions over the coordinates of a chart.
//
// Grammar (EBNF, also documented in the README):
//   expr    = term  { ("+" | "-") term } ;
//   term    = factor { ("*" | "/") factor } ;
//   factor  = { "+" | "-" } power ;              (* unary sign *)
//   power   = atom [ "^" factor ] ;              (* right associative *)
//   atom    = number | ident | ident "(" expr ")" | "(" expr ")" ;
//   number  = digits ["." digits] [("e"|"E") ["+"|"-"] digits] | "." digits ... ;
//
// "^" binds tighter than unary minus: -x^2 parses as -(x^2).
// Function identifiers: sin cos exp log sqrt abs.

enum class ExprKind {
  Constant,
  Variable,
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Abs,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct ExprNode {
  ExprKind kind;
  double value = 0.0;  // Constant
  int var = -1;        // Variable
  std::shared_ptr<const ExprNode> a, b;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable parsed expression tied to a coordinate list. Safe to share
/// across threads after construction.
class ScalarExpr {
 public:
  ScalarExpr() = default;
  ScalarExpr(ExprPtr root, std::shared_ptr<const std::vector<std::string>> coords)
      : root_(std::move(root)), coords_(std::move(coords)) {}

  bool valid() const { return root_ != nullptr; }
  const ExprPtr& root() const { return root_; }
  int dim() const { return coords_ ? static_cast<int>(coords_->size()) : 0; }
  const std::vector<std::string>& coords() const { return *coords_; }
  std::shared_ptr<const std::vector<std::string>> coords_ptr() const { return coords_; }

  std::string to_string() const;
  bool same_structure(const ScalarExpr& other) const;

  double eval_value(std::span<const double> p) const;
  long double eval_value_ld(std::span<const long double> p) const;
  Jet2 eval_jet2(std::span<const double> p) const;

  // Programmatic constructors (used to assemble induced tensors).
  static ScalarExpr constant(double c, std::shared_ptr<const std::vector<std::string>> coords);
  static ScalarExpr variable(int k, std::shared_ptr<const std::vector<std::string>> coords);
  static ScalarExpr binary(ExprKind k, const ScalarExpr& a, const ScalarExpr& b);
  static ScalarExpr unary(ExprKind k, const ScalarExpr& a);

 private:
  ExprPtr root_;
  std::shared_ptr<const std::vector<std::string>> coords_;
};

ScalarExpr parse_expression(std::string_view source, std::shared_ptr<const std::vector<std::string>> coords);
inline ScalarExpr parse_expression(std::string_view source, const std::vector<std::string>& coords) {
  return parse_expression(source, std::make_shared<const std::vector<std::string>>(coords));
}

// ---------------------------------------------------------------------------
// implementation
// ---------------------------------------------------------------------------

namespace detail {

inline ExprPtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind = End;
  std::size_t offset = 0;
  double number = 0.0;
  std::string ident;

  Token() = default;
  Token(Kind k, std::size_t off) : kind(k), offset(off) {}
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ >= src_.size()) return {Token::End, src_.size()};
    const std::size_t start = pos_;
    const char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {Token::Plus, start};
      case '-': ++pos_; return {Token::Minus, start};
      case '*': ++pos_; return {Token::Star, start};
      case '/': ++pos_; return {Token::Slash, start};
      case '^': ++pos_; return {Token::Caret, start};
      case '(': ++pos_; return {Token::LParen, start};
      case ')': ++pos_; return {Token::RParen, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number(start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
      Token t{Token::Ident, start};
      t.ident = std::string(src_.substr(start, end - start));
      pos_ = end;
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  Token lex_number(std::size_t start) {
    std::size_t end = pos_;
    while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
        while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
        end = e;
      }
    }
    Token t{Token::Number, start};
    const std::string text(src_.substr(start, end - start));
    try {
      t.number = std::stod(text);
    } catch (const std::exception&) {
      throw ParseError("invalid numeric literal '" + text + "'", start);
    }
    pos_ = end;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, std::shared_ptr<const std::vector<std::string>> coords)
      : lexer_(src), coords_(std::move(coords)) {
    advance();
  }

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    if (cur_.kind != Token::End) throw ParseError("expected end of input", cur_.offset);
    return e;
  }

  std::shared_ptr<const std::vector<std::string>> coords() const { return coords_; }

 private:
  void advance() { cur_ = lexer_.next(); }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
      const ExprKind k = cur_.kind == Token::Plus ? ExprKind::Add : ExprKind::Sub;
      advance();
      ExprPtr rhs = parse_term();
      lhs = make_node({k, 0.0, -1, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (cur_.kind == Token::Star || cur_.kind == Token::Slash) {
      const ExprKind k = cur_.kind == Token::Star ? ExprKind::Mul : ExprKind::Div;
      advance();
      ExprPtr rhs = parse_factor();
      lhs = make_node({k, 0.0, -1, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    bool negate = false;
    while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
      if (cur_.kind == Token::Minus) negate = !negate;
      advance();
    }
    ExprPtr e = parse_power();
    if (negate) e = make_node({ExprKind::Neg, 0.0, -1, e, nullptr});
    return e;
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (cur_.kind == Token::Caret) {
      advance();
      ExprPtr expo = parse_factor();  // right associative; sign allowed in exponent
      return make_node({ExprKind::Pow, 0.0, -1, base, expo});
    }
    return base;
  }

  ExprPtr parse_atom() {
    if (cur_.kind == Token::Number) {
      ExprPtr e = make_node({ExprKind::Constant, cur_.number, -1, nullptr, nullptr});
      advance();
      return e;
    }
    if (cur_.kind == Token::LParen) {
      advance();
      ExprPtr e = parse_expr();
      expect(Token::RParen, "expected ')'");
      return e;
    }
    if (cur_.kind == Token::Ident) {
      const std::string name = cur_.ident;
      const std::size_t off = cur_.offset;
      advance();
      if (cur_.kind == Token::LParen) {
        const ExprKind k = function_kind(name, off);
        advance();
        ExprPtr arg = parse_expr();
        expect(Token::RParen, "expected ')'");
        return make_node({k, 0.0, -1, arg, nullptr});
      }
      for (int i = 0; i < static_cast<int>(coords_->size()); ++i) {
        if ((*coords_)[static_cast<std::size_t>(i)] == name)
          return make_node({ExprKind::Variable, 0.0, i, nullptr, nullptr});
      }
      throw ParseError("unknown identifier '" + name + "'", off);
    }
    throw ParseError("expected expression", cur_.offset);
  }

  static ExprKind function_kind(const std::string& name, std::size_t off) {
    if (name == "sin") return ExprKind::Sin;
    if (name == "cos") return ExprKind::Cos;
    if (name == "exp") return ExprKind::Exp;
    if (name == "log") return ExprKind::Log;
    if (name == "sqrt") return ExprKind::Sqrt;
    if (name == "abs") return ExprKind::Abs;
    throw ParseError("unknown function '" + name + "'", off);
  }

  void expect(Token::Kind k, const char* msg) {
    if (cur_.kind != k) throw ParseError(msg, cur_.offset);
    advance();
  }

  Lexer lexer_;
  Token cur_{Token::End, 0};
  std::shared_ptr<const std::vector<std::string>> coords_;
};

/// Exponent subtrees without variables are evaluated once; an integer
/// result selects the exact integer-power rule (valid for any base).
inline bool subtree_constant(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Constant: return true;
    case ExprKind::Variable: return false;
    default:
      if (n.a && !subtree_constant(*n.a)) return false;
      if (n.b && !subtree_constant(*n.b)) return false;
      return true;
  }
}

template <class T>
T eval_plain(const ExprNode& n, std::span<const T> p);

inline std::string print_node(const ExprNode& n, const std::vector<std::string>& coords);

template <class T>
std::string point_string(std::span<const T> p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << static_cast<double>(p[i]);
  os << ")";
  return os.str();
}

template <class T>
[[noreturn]] void domain_error(const char* what, const ExprNode& n, const std::vector<std::string>& coords,
                               std::span<const T> p) {
  throw EvalError(std::string("domain error: ") + what + " in subexpression '" + print_node(n, coords) + "' at point " +
                  point_string(p));
}

template <class T>
T ipow_plain(T x, long long k) {
  T acc(1), b = x;
  while (k > 0) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

template <class T>
T eval_plain_impl(const ExprNode& n, std::span<const T> p, const std::vector<std::string>& coords) {
  switch (n.kind) {
    case ExprKind::Constant: return static_cast<T>(n.value);
    case ExprKind::Variable: return p[static_cast<std::size_t>(n.var)];
    case ExprKind::Neg: return -eval_plain_impl(*n.a, p, coords);
    case ExprKind::Sin: return std::sin(eval_plain_impl(*n.a, p, coords));
    case ExprKind::Cos: return std::cos(eval_plain_impl(*n.a, p, coords));
    case ExprKind::Exp: return std::exp(eval_plain_impl(*n.a, p, coords));
    case ExprKind::Log: {
      const T a = eval_plain_impl(*n.a, p, coords);
      if (!(a > T(0))) domain_error("log of non-positive value", n, coords, p);
      return std::log(a);
    }
    case ExprKind::Sqrt: {
      const T a = eval_plain_impl(*n.a, p, coords);
      if (a < T(0)) domain_error("sqrt of negative value", n, coords, p);
      return std::sqrt(a);
    }
    case ExprKind::Abs: {
      const T a = eval_plain_impl(*n.a, p, coords);
      return a < T(0) ? -a : a;
    }
    case ExprKind::Add: return eval_plain_impl(*n.a, p, coords) + eval_plain_impl(*n.b, p, coords);
    case ExprKind::Sub: return eval_plain_impl(*n.a, p, coords) - eval_plain_impl(*n.b, p, coords);
    case ExprKind::Mul: return eval_plain_impl(*n.a, p, coords) * eval_plain_impl(*n.b, p, coords);
    case ExprKind::Div: {
      const T b = eval_plain_impl(*n.b, p, coords);
      if (b == T(0)) domain_error("division by zero", n, coords, p);
      return eval_plain_impl(*n.a, p, coords) / b;
    }
    case ExprKind::Pow: {
      const T base = eval_plain_impl(*n.a, p, coords);
      const T expo = eval_plain_impl(*n.b, p, coords);
      if (subtree_constant(*n.b)) {
        const double e = static_cast<double>(expo);
        if (e == std::floor(e) && std::abs(e) < 1e15) {
          const long long k = static_cast<long long>(e);
          if (k < 0 && base == T(0)) domain_error("zero base with negative exponent", n, coords, p);
          if (k < 0) return T(1) / ipow_plain(base, -k);
          return ipow_plain(base, k);
        }
      }
      if (!(base > T(0))) domain_error("non-integer power of non-positive base", n, coords, p);
      return std::pow(base, expo);
    }
  }
  throw EvalError("corrupt expression node");
}

/// Jet evaluation rejects points where a derivative (not just the value)
/// is singular, e.g. sqrt at exactly zero or abs at exactly zero.
inline Jet2 eval_jet2_impl(const ExprNode& n, std::span<const double> p, const std::vector<std::string>& coords) {
  const int dim = static_cast<int>(p.size());
  switch (n.kind) {
    case ExprKind::Constant: return Jet2::constant(n.value, dim);
    case ExprKind::Variable: return Jet2::variable(p[static_cast<std::size_t>(n.var)], n.var, dim);
    case ExprKind::Neg: return -eval_jet2_impl(*n.a, p, coords);
    case ExprKind::Sin: return sin(eval_jet2_impl(*n.a, p, coords));
    case ExprKind::Cos: return cos(eval_jet2_impl(*n.a, p, coords));
    case ExprKind::Exp: return exp(eval_jet2_impl(*n.a, p, coords));
    case ExprKind::Log: {
      const Jet2 a = eval_jet2_impl(*n.a, p, coords);
      if (!(a.v > 0.0)) domain_error("log of non-positive value", n, coords, p);
      return log(a);
    }
    case ExprKind::Sqrt: {
      const Jet2 a = eval_jet2_impl(*n.a, p, coords);
      if (!(a.v > 0.0)) domain_error("sqrt of non-positive value (derivative singular)", n, coords, p);
      return sqrt(a);
    }
    case ExprKind::Abs: {
      const Jet2 a = eval_jet2_impl(*n.a, p, coords);
      if (a.v == 0.0) domain_error("abs evaluated at zero (derivative undefined)", n, coords, p);
      return abs(a);
    }
    case ExprKind::Add: return eval_jet2_impl(*n.a, p, coords) + eval_jet2_impl(*n.b, p, coords);
    case ExprKind::Sub: return eval_jet2_impl(*n.a, p, coords) - eval_jet2_impl(*n.b, p, coords);
    case ExprKind::Mul: return eval_jet2_impl(*n.a, p, coords) * eval_jet2_impl(*n.b, p, coords);
    case ExprKind::Div: {
      const Jet2 b = eval_jet2_impl(*n.b, p, coords);
      if (b.v == 0.0) domain_error("division by zero", n, coords, p);
      return eval_jet2_impl(*n.a, p, coords) / b;
    }
    case ExprKind::Pow: {
      const Jet2 base = eval_jet2_impl(*n.a, p, coords);
      if (subtree_constant(*n.b)) {
        const double e = eval_plain_impl<double>(*n.b, p, coords);
        if (e == std::floor(e) && std::abs(e) < 1e15) {
          const long long k = static_cast<long long>(e);
          if (k < 0 && base.v == 0.0) domain_error("zero base with negative exponent", n, coords, p);
          return jet_ipow(base, k);
        }
        if (!(base.v > 0.0)) domain_error("non-integer power of non-positive base", n, coords, p);
        return jet_rpow(base, e);
      }
      const Jet2 expo = eval_jet2_impl(*n.b, p, coords);
      if (!(base.v > 0.0)) domain_error("non-integer power of non-positive base", n, coords, p);
      // a^w = exp(w log a); the value is taken from std::pow so the plain
      // and jet evaluation paths agree bit for bit
      const Jet2 m = expo * log(base);
      const double v = std::pow(base.v, expo.v);
      return jet_compose(m, v, v, v);
    }
  }
  throw EvalError("corrupt expression node");
}

inline int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string print_node(const ExprNode& n, const std::vector<std::string>& coords) {
  const auto wrap = [&](const ExprNode& child, bool strict) {
    const std::string s = print_node(child, coords);
    const int pc = precedence(child.kind), pn = precedence(n.kind);
    if (pc < pn || (strict && pc == pn)) return "(" + s + ")";
    return s;
  };
  switch (n.kind) {
    case ExprKind::Constant: {
      if (n.value < 0.0) return "(" + format_double(n.value) + ")";
      return format_double(n.value);
    }
    case ExprKind::Variable: return coords[static_cast<std::size_t>(n.var)];
    case ExprKind::Neg: return "-" + wrap(*n.a, false);
    case ExprKind::Sin: return "sin(" + print_node(*n.a, coords) + ")";
    case ExprKind::Cos: return "cos(" + print_node(*n.a, coords) + ")";
    case ExprKind::Exp: return "exp(" + print_node(*n.a, coords) + ")";
    case ExprKind::Log: return "log(" + print_node(*n.a, coords) + ")";
    case ExprKind::Sqrt: return "sqrt(" + print_node(*n.a, coords) + ")";
    case ExprKind::Abs: return "abs(" + print_node(*n.a, coords) + ")";
    case ExprKind::Add: return wrap(*n.a, false) + "+" + wrap(*n.b, true);
    case ExprKind::Sub: return wrap(*n.a, false) + "-" + wrap(*n.b, true);
    case ExprKind::Mul: return wrap(*n.a, false) + "*" + wrap(*n.b, true);
    case ExprKind::Div: return wrap(*n.a, false) + "/" + wrap(*n.b, true);
    case ExprKind::Pow: return wrap(*n.a, true) + "^" + wrap(*n.b, false);
  }
  return "?";
}

inline bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Constant: return a.value == b.value;
    case ExprKind::Variable: return a.var == b.var;
    default: break;
  }
  if (static_cast<bool>(a.a) != static_cast<bool>(b.a) || static_cast<bool>(a.b) != static_cast<bool>(b.b)) return false;
  if (a.a && !nodes_equal(*a.a, *b.a)) return false;
  if (a.b && !nodes_equal(*a.b, *b.b)) return false;
  return true;
}

}  // namespace detail

inline ScalarExpr parse_expression(std::string_view source, std::shared_ptr<const std::vector<std::string>> coords) {
  detail::Parser parser(source, std::move(coords));
  ExprPtr root = parser.parse();
  return ScalarExpr(root, parser.coords());
}

inline std::string ScalarExpr::to_string() const { return detail::print_node(*root_, *coords_); }

inline bool ScalarExpr::same_structure(const ScalarExpr& other) const {
  return detail::nodes_equal(*root_, *other.root_);
}

inline double ScalarExpr::eval_value(std::span<const double> p) const {
  return detail::eval_plain_impl<double>(*root_, p, *coords_);
}

inline long double ScalarExpr::eval_value_ld(std::span<const long double> p) const {
  return detail::eval_plain_impl<long double>(*root_, p, *coords_);
}

inline Jet2 ScalarExpr::eval_jet2(std::span<const double> p) const {
  return detail::eval_jet2_impl(*root_, p, *coords_);
}

inline ScalarExpr ScalarExpr::constant(double c, std::shared_ptr<const std::vector<std::string>> coords) {
  return ScalarExpr(detail::make_node({ExprKind::Constant, c, -1, nullptr, nullptr}), std::move(coords));
}
inline ScalarExpr ScalarExpr::variable(int k, std::shared_ptr<const std::vector<std::string>> coords) {
  return ScalarExpr(detail::make_node({ExprKind::Variable, 0.0, k, nullptr, nullptr}), std::move(coords));
}
inline ScalarExpr ScalarExpr::binary(ExprKind k, const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(detail::make_node({k, 0.0, -1, a.root(), b.root()}), a.coords_ptr());
}
inline ScalarExpr ScalarExpr::unary(ExprKind k, const ScalarExpr& a) {
  return ScalarExpr(detail::make_node({k, 0.0, -1, a.root(), nullptr}), a.coords_ptr());
}

}  // namespace pkt
