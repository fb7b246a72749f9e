#include "kahler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <utility>

namespace kahler {

struct Expr::Node {
  NodeKind kind = NodeKind::Constant;
  Edif value;
  int int_exponent = 0;
  double real_exponent = 0.0;
  Elementary function = Elementary::Exp;
  std::vector<Expr> children;
};

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(const Edif& value) {
  if (!value.is_finite()) {
    throw NonFinite("expression constants must be finite");
  }
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::z() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  return Expr(std::move(n));
}

Expr Expr::coord_x() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::CoordX;
  return Expr(std::move(n));
}

Expr Expr::coord_y() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::CoordY;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  if (kind != NodeKind::Add && kind != NodeKind::Sub && kind != NodeKind::Mul &&
      kind != NodeKind::Div) {
    throw std::invalid_argument("Expr::binary needs Add, Sub, Mul or Div");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::int_pow(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::IntPow;
  n->int_exponent = exponent;
  n->children.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr Expr::real_pow(Expr base, double exponent) {
  if (!std::isfinite(exponent)) {
    throw NonFinite("power exponent must be finite");
  }
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::RealPow;
  n->real_exponent = exponent;
  n->children.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr Expr::apply(Elementary function, Expr argument) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Function;
  n->function = function;
  n->children.push_back(std::move(argument));
  return Expr(std::move(n));
}

Expr Expr::raw_field(Expr u, Expr v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::RawField;
  n->children.push_back(std::move(u));
  n->children.push_back(std::move(v));
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
const Edif& Expr::value() const { return node_->value; }
int Expr::int_exponent() const { return node_->int_exponent; }
double Expr::real_exponent() const { return node_->real_exponent; }
Elementary Expr::function() const { return node_->function; }
std::span<const Expr> Expr::children() const { return node_->children; }

bool Expr::is_function_of_z() const {
  switch (kind()) {
    case NodeKind::CoordX:
    case NodeKind::CoordY:
    case NodeKind::RawField:
      return false;
    default:
      return std::all_of(children().begin(), children().end(),
                         [](const Expr& c) { return c.is_function_of_z(); });
  }
}

std::size_t Expr::depth() const {
  std::size_t d = 0;
  for (const Expr& c : children()) {
    d = std::max(d, c.depth());
  }
  return d + 1;
}

Expr operator+(Expr lhs, Expr rhs) { return Expr::binary(NodeKind::Add, std::move(lhs), std::move(rhs)); }
Expr operator-(Expr lhs, Expr rhs) { return Expr::binary(NodeKind::Sub, std::move(lhs), std::move(rhs)); }
Expr operator*(Expr lhs, Expr rhs) { return Expr::binary(NodeKind::Mul, std::move(lhs), std::move(rhs)); }
Expr operator/(Expr lhs, Expr rhs) { return Expr::binary(NodeKind::Div, std::move(lhs), std::move(rhs)); }
Expr operator-(Expr operand) { return Expr::negate(std::move(operand)); }

ParseError::ParseError(std::string message, std::size_t position, std::vector<std::string> expected)
    : std::runtime_error(std::move(message)), position_(position), expected_(std::move(expected)) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Ident, LParen, RParen, Plus, Minus, Star, Slash, Caret, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string text;
  double number = 0.0;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Number:
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  Parser(std::string_view text, bool component_mode)
      : text_(text), component_mode_(component_mode) {
    advance();
  }

  Expr parse() {
    Expr e = expr();
    if (cur_.kind != Tok::End) {
      fail({"'+'", "'-'", "'*'", "'/'", "end of input"});
    }
    return e;
  }

 private:
  std::string_view text_;
  bool component_mode_;
  std::size_t at_ = 0;
  Token cur_;

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::ostringstream msg;
    msg << "parse error at position " << cur_.pos << ": unexpected " << describe(cur_)
        << ", expected one of";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      msg << (i == 0 ? " " : ", ") << expected[i];
    }
    throw ParseError(msg.str(), cur_.pos, std::move(expected));
  }

  void advance() {
    while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_]))) {
      ++at_;
    }
    cur_ = Token{};
    cur_.pos = at_;
    if (at_ >= text_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    const char c = text_[at_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = at_;
      while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) {
        ++end;
      }
      cur_.kind = Tok::Ident;
      cur_.text = std::string(text_.substr(at_, end - at_));
      at_ = end;
      return;
    }
    cur_.text = std::string(1, c);
    switch (c) {
      case '(': cur_.kind = Tok::LParen; break;
      case ')': cur_.kind = Tok::RParen; break;
      case '+': cur_.kind = Tok::Plus; break;
      case '-': cur_.kind = Tok::Minus; break;
      case '*': cur_.kind = Tok::Star; break;
      case '/': cur_.kind = Tok::Slash; break;
      case '^': cur_.kind = Tok::Caret; break;
      default: {
        std::ostringstream msg;
        msg << "parse error at position " << at_ << ": invalid character '" << c << "'";
        throw ParseError(msg.str(), at_, {"number", "identifier", "operator", "parenthesis"});
      }
    }
    ++at_;
  }

  void lex_number() {
    std::size_t end = at_;
    auto digits = [&] {
      std::size_t n = 0;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
        ++end;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      mantissa += digits();
    }
    if (mantissa == 0) {
      throw ParseError("parse error at position " + std::to_string(at_) + ": malformed number",
                       at_, {"digit"});
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) {
        ++end;
      }
      if (digits() == 0) {
        end = save;  // "2e" is the number 2 followed by an identifier
      }
    }
    cur_.kind = Tok::Number;
    cur_.text = std::string(text_.substr(at_, end - at_));
    const auto res = std::from_chars(text_.data() + at_, text_.data() + end, cur_.number);
    if (res.ec != std::errc{} || !std::isfinite(cur_.number)) {
      throw ParseError("parse error at position " + std::to_string(at_) + ": number out of range",
                       at_, {"finite number"});
    }
    at_ = end;
  }

  static bool is_const(const Expr& e) { return e.kind() == NodeKind::Constant; }

  static Expr fold(NodeKind kind, Expr lhs, Expr rhs) {
    if (is_const(lhs) && is_const(rhs)) {
      const Edif a = lhs.value();
      const Edif b = rhs.value();
      switch (kind) {
        case NodeKind::Add: return Expr::constant(a + b);
        case NodeKind::Sub: return Expr::constant(a - b);
        case NodeKind::Mul: return Expr::constant(a * b);
        case NodeKind::Div:
          if (b.u != 0.0 || b.v != 0.0) {
            const Edif q = a / b;
            if (q.is_finite()) {
              return Expr::constant(q);
            }
          }
          break;
        default: break;
      }
    }
    return Expr::binary(kind, std::move(lhs), std::move(rhs));
  }

  Expr expr() {
    Expr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const NodeKind k = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      advance();
      lhs = fold(k, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const NodeKind k = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      advance();
      lhs = fold(k, std::move(lhs), factor());
    }
    return lhs;
  }

  Expr factor() {
    bool negative = false;
    if (cur_.kind == Tok::Minus) {
      negative = true;
      advance();
    }
    Expr b = base();
    if (cur_.kind == Tok::Caret) {
      advance();
      b = power(std::move(b), exponent());
    }
    if (negative) {
      if (is_const(b)) {
        return Expr::constant(-b.value());
      }
      return Expr::negate(std::move(b));
    }
    return b;
  }

  double exponent() {
    bool paren = false;
    if (cur_.kind == Tok::LParen) {
      paren = true;
      advance();
    }
    double sign = 1.0;
    if (cur_.kind == Tok::Minus) {
      sign = -1.0;
      advance();
    }
    if (cur_.kind != Tok::Number) {
      fail({"number"});
    }
    const double value = sign * cur_.number;
    advance();
    if (paren) {
      if (cur_.kind != Tok::RParen) {
        fail({"')'"});
      }
      advance();
    }
    return value;
  }

  static Expr power(Expr b, double exponent) {
    const bool integral = std::nearbyint(exponent) == exponent && std::abs(exponent) <= 1.0e6;
    if (integral) {
      const int n = static_cast<int>(exponent);
      if (is_const(b) && (n >= 0 || b.value().u != 0.0 || b.value().v != 0.0)) {
        return Expr::constant(edif_ipow(b.value(), n));
      }
      return Expr::int_pow(std::move(b), n);
    }
    return Expr::real_pow(std::move(b), exponent);
  }

  Expr base() {
    switch (cur_.kind) {
      case Tok::Number: {
        const double v = cur_.number;
        advance();
        return Expr::constant(Edif{v});
      }
      case Tok::LParen: {
        advance();
        Expr e = expr();
        if (cur_.kind != Tok::RParen) {
          fail({"')'", "'+'", "'-'", "'*'", "'/'"});
        }
        advance();
        return e;
      }
      case Tok::Ident: {
        const std::string name = cur_.text;
        if (name == "pi") {
          advance();
          return Expr::constant(Edif{std::numbers::pi});
        }
        if (!component_mode_ && name == "z") {
          advance();
          return Expr::z();
        }
        if (!component_mode_ && name == "I") {
          advance();
          return Expr::constant(Edif::unit());
        }
        if (component_mode_ && name == "x") {
          advance();
          return Expr::coord_x();
        }
        if (component_mode_ && name == "y") {
          advance();
          return Expr::coord_y();
        }
        Elementary fn{};
        try {
          fn = elementary_from_name(name);
        } catch (const std::invalid_argument&) {
          fail(base_expected());
        }
        advance();
        if (cur_.kind != Tok::LParen) {
          fail({"'('"});
        }
        advance();
        Expr arg = expr();
        if (cur_.kind != Tok::RParen) {
          fail({"')'"});
        }
        advance();
        if (is_const(arg)) {
          try {
            return Expr::constant(edif_elementary(fn, arg.value()));
          } catch (const std::exception&) {
            // singular constants stay unevaluated and fail at evaluation time
          }
        }
        return Expr::apply(fn, std::move(arg));
      }
      default:
        fail(base_expected());
    }
  }

  std::vector<std::string> base_expected() const {
    std::vector<std::string> e{"number", "'('", "'pi'"};
    if (component_mode_) {
      e.insert(e.end(), {"'x'", "'y'"});
    } else {
      e.insert(e.end(), {"'z'", "'I'"});
    }
    for (const char* f : {"exp", "log", "sin", "cos", "tan", "sinh", "cosh", "sqrt"}) {
      e.push_back(std::string("'") + f + "('");
    }
    return e;
  }
};

// ---------------------------------------------------------------------------
// Rendering

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (std::signbit(v)) {
    return "(" + s + ")";
  }
  return s;
}

std::string constant_text(const Edif& c) {
  if (c.v == 0.0 && !std::signbit(c.v)) {
    return number_text(c.u);
  }
  return "(" + number_text(c.u) + "+" + number_text(c.v) + "*I)";
}

void render_into(const Expr& f, std::string& out) {
  const auto kids = f.children();
  switch (f.kind()) {
    case NodeKind::Constant: out += constant_text(f.value()); return;
    case NodeKind::Variable: out += "z"; return;
    case NodeKind::CoordX: out += "x"; return;
    case NodeKind::CoordY: out += "y"; return;
    case NodeKind::Negate:
      out += "(-";
      render_into(kids[0], out);
      out += ")";
      return;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      const char op = f.kind() == NodeKind::Add   ? '+'
                      : f.kind() == NodeKind::Sub ? '-'
                      : f.kind() == NodeKind::Mul ? '*'
                                                  : '/';
      out += "(";
      render_into(kids[0], out);
      out += op;
      render_into(kids[1], out);
      out += ")";
      return;
    }
    case NodeKind::IntPow:
      out += "(";
      render_into(kids[0], out);
      out += "^(" + std::to_string(f.int_exponent()) + "))";
      return;
    case NodeKind::RealPow: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", f.real_exponent());
      out += "(";
      render_into(kids[0], out);
      out += "^(" + std::string(buf) + "))";
      return;
    }
    case NodeKind::Function:
      out += to_string(f.function());
      out += "(";
      render_into(kids[0], out);
      out += ")";
      return;
    case NodeKind::RawField:
      throw std::invalid_argument("raw fields have no textual form");
  }
}

// ---------------------------------------------------------------------------
// Evaluation

Edif eval_node(const Expr& f, const Point& at) {
  const auto kids = f.children();
  Edif r;
  switch (f.kind()) {
    case NodeKind::Constant: return f.value();
    case NodeKind::Variable: return at.to_edif();
    case NodeKind::CoordX: return Edif{at.x};
    case NodeKind::CoordY: return Edif{at.y};
    case NodeKind::Negate: r = -eval_node(kids[0], at); break;
    case NodeKind::Add: r = eval_node(kids[0], at) + eval_node(kids[1], at); break;
    case NodeKind::Sub: r = eval_node(kids[0], at) - eval_node(kids[1], at); break;
    case NodeKind::Mul: r = eval_node(kids[0], at) * eval_node(kids[1], at); break;
    case NodeKind::Div: r = eval_node(kids[0], at) / eval_node(kids[1], at); break;
    case NodeKind::IntPow: r = edif_ipow(eval_node(kids[0], at), f.int_exponent()); break;
    case NodeKind::RealPow: r = edif_pow_real(eval_node(kids[0], at), f.real_exponent()); break;
    case NodeKind::Function: r = edif_elementary(f.function(), eval_node(kids[0], at)); break;
    case NodeKind::RawField: r = {eval_node(kids[0], at).u, eval_node(kids[1], at).u}; break;
  }
  if (!r.is_finite()) {
    throw NonFinite("field value is not finite");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Differentiation with light simplification

bool is_const_value(const Expr& e, double u) {
  return e.kind() == NodeKind::Constant && e.value() == Edif{u};
}

Expr s_neg(const Expr& a) {
  if (a.kind() == NodeKind::Constant) {
    return Expr::constant(-a.value());
  }
  if (a.kind() == NodeKind::Negate) {
    return a.children()[0];
  }
  return -a;
}

Expr s_add(const Expr& a, const Expr& b) {
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  if (a.kind() == NodeKind::Constant && b.kind() == NodeKind::Constant) {
    return Expr::constant(a.value() + b.value());
  }
  return a + b;
}

Expr s_sub(const Expr& a, const Expr& b) {
  if (is_const_value(b, 0.0)) return a;
  if (is_const_value(a, 0.0)) return s_neg(b);
  if (a.kind() == NodeKind::Constant && b.kind() == NodeKind::Constant) {
    return Expr::constant(a.value() - b.value());
  }
  return a - b;
}

Expr s_mul(const Expr& a, const Expr& b) {
  if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return Expr::constant(Edif{});
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  if (a.kind() == NodeKind::Constant && b.kind() == NodeKind::Constant) {
    return Expr::constant(a.value() * b.value());
  }
  // keep constants on the left so repeated factors fold
  if (b.kind() == NodeKind::Constant) {
    return s_mul(b, a);
  }
  if (a.kind() == NodeKind::Constant && b.kind() == NodeKind::Mul &&
      b.children()[0].kind() == NodeKind::Constant) {
    return s_mul(Expr::constant(a.value() * b.children()[0].value()), b.children()[1]);
  }
  return a * b;
}

Expr s_div(const Expr& a, const Expr& b) {
  if (is_const_value(a, 0.0)) return Expr::constant(Edif{});
  if (is_const_value(b, 1.0)) return a;
  return a / b;
}

Expr s_ipow(const Expr& a, int n) {
  if (n == 0) return Expr::constant(Edif{1.0});
  if (n == 1) return a;
  if (a.kind() == NodeKind::IntPow) {
    const long long m = static_cast<long long>(a.int_exponent()) * n;
    if (m >= -1000000 && m <= 1000000) {
      return s_ipow(a.children()[0], static_cast<int>(m));
    }
  }
  return Expr::int_pow(a, n);
}

Expr derive(const Expr& f) {
  const auto kids = f.children();
  switch (f.kind()) {
    case NodeKind::Constant: return Expr::constant(Edif{});
    case NodeKind::Variable: return Expr::constant(Edif{1.0});
    case NodeKind::CoordX:
    case NodeKind::CoordY:
    case NodeKind::RawField:
      throw NotDifferentiable("d/dz is defined only for fields built from z");
    case NodeKind::Negate: return s_neg(derive(kids[0]));
    case NodeKind::Add: return s_add(derive(kids[0]), derive(kids[1]));
    case NodeKind::Sub: return s_sub(derive(kids[0]), derive(kids[1]));
    case NodeKind::Mul:
      return s_add(s_mul(derive(kids[0]), kids[1]), s_mul(kids[0], derive(kids[1])));
    case NodeKind::Div: {
      const Expr& a = kids[0];
      const Expr& b = kids[1];
      const Expr db = derive(b);
      if (db.kind() == NodeKind::Constant && db.value() == Edif{}) {
        return s_div(derive(a), b);
      }
      return s_div(s_sub(s_mul(derive(a), b), s_mul(a, db)), s_ipow(b, 2));
    }
    case NodeKind::IntPow: {
      const int n = f.int_exponent();
      if (n == 0) return Expr::constant(Edif{});
      return s_mul(s_mul(Expr::constant(Edif{static_cast<double>(n)}), s_ipow(kids[0], n - 1)),
                   derive(kids[0]));
    }
    case NodeKind::RealPow: {
      const double p = f.real_exponent();
      return s_mul(s_mul(Expr::constant(Edif{p}), Expr::real_pow(kids[0], p - 1.0)),
                   derive(kids[0]));
    }
    case NodeKind::Function: {
      const Expr& a = kids[0];
      const Expr da = derive(a);
      switch (f.function()) {
        case Elementary::Exp: return s_mul(f, da);
        case Elementary::Log: return s_div(da, a);
        case Elementary::Sin: return s_mul(Expr::apply(Elementary::Cos, a), da);
        case Elementary::Cos: return s_neg(s_mul(Expr::apply(Elementary::Sin, a), da));
        case Elementary::Tan: return s_div(da, s_ipow(Expr::apply(Elementary::Cos, a), 2));
        case Elementary::Sinh: return s_mul(Expr::apply(Elementary::Cosh, a), da);
        case Elementary::Cosh: return s_mul(Expr::apply(Elementary::Sinh, a), da);
        case Elementary::Sqrt: return s_div(da, s_mul(Expr::constant(Edif{2.0}), f));
      }
    }
  }
  throw NotDifferentiable("unsupported node kind");
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text, false).parse(); }

Expr parse_component(std::string_view text) { return Parser(text, true).parse(); }

std::string render(const Expr& f) {
  std::string out;
  render_into(f, out);
  return out;
}

Edif eval_field(const Expr& f, const Point& at) {
  try {
    return eval_node(f, at);
  } catch (const ZeroDivisor& e) {
    throw SingularEvaluation(std::string("singular evaluation: ") + e.what());
  } catch (const ZeroEdif& e) {
    throw SingularEvaluation(std::string("singular evaluation: ") + e.what());
  }
}

Expr differentiate(const Expr& f) { return derive(f); }

Expr differentiate(const Expr& f, int order) {
  if (order < 0) {
    throw std::invalid_argument("derivative order must be non-negative");
  }
  Expr g = f;
  for (int i = 0; i < order; ++i) {
    g = derive(g);
  }
  return g;
}

}  // namespace kahler
