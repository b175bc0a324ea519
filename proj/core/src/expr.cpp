#include "qmetric/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <optional>

#include "qmetric/errors.hpp"

namespace qmetric {

struct ExprAst::Node {
  enum class Kind {
    constant,
    var_x,
    var_y,
    parameter,
    negate,
    add,
    subtract,
    multiply,
    divide,
    power,
    call
  };

  Kind kind;
  double value = 0.0;            // constant
  std::string name;              // parameter
  Func func = Func::exp;         // call
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = ExprAst::Node;
using Kind = Node::Kind;

std::shared_ptr<const Node> make_node(Node n) {
  return std::make_shared<const Node>(std::move(n));
}

const char* func_name(ExprAst::Func f) {
  switch (f) {
    case ExprAst::Func::exp: return "exp";
    case ExprAst::Func::sqrt: return "sqrt";
    case ExprAst::Func::sin: return "sin";
    case ExprAst::Func::cos: return "cos";
    case ExprAst::Func::abs: return "abs";
  }
  return "?";
}

std::optional<ExprAst::Func> func_from_name(std::string_view s) {
  if (s == "exp") return ExprAst::Func::exp;
  if (s == "sqrt") return ExprAst::Func::sqrt;
  if (s == "sin") return ExprAst::Func::sin;
  if (s == "cos") return ExprAst::Func::cos;
  if (s == "abs") return ExprAst::Func::abs;
  return std::nullopt;
}

bool is_reserved(std::string_view s) {
  return s == "x" || s == "y" || s == "pi" || func_from_name(s).has_value();
}

double eval_node(const Node& n, double x, double y, const ParamPoint& params) {
  switch (n.kind) {
    case Kind::constant: return n.value;
    case Kind::var_x: return x;
    case Kind::var_y: return y;
    case Kind::parameter: return params.at(n.name);
    case Kind::negate: return -eval_node(*n.a, x, y, params);
    case Kind::add:
      return eval_node(*n.a, x, y, params) + eval_node(*n.b, x, y, params);
    case Kind::subtract:
      return eval_node(*n.a, x, y, params) - eval_node(*n.b, x, y, params);
    case Kind::multiply:
      return eval_node(*n.a, x, y, params) * eval_node(*n.b, x, y, params);
    case Kind::divide:
      return eval_node(*n.a, x, y, params) / eval_node(*n.b, x, y, params);
    case Kind::power:
      return std::pow(eval_node(*n.a, x, y, params),
                      eval_node(*n.b, x, y, params));
    case Kind::call: {
      const double v = eval_node(*n.a, x, y, params);
      switch (n.func) {
        case ExprAst::Func::exp: return std::exp(v);
        case ExprAst::Func::sqrt: return std::sqrt(v);
        case ExprAst::Func::sin: return std::sin(v);
        case ExprAst::Func::cos: return std::cos(v);
        case ExprAst::Func::abs: return std::fabs(v);
      }
      break;
    }
  }
  throw ContractError("corrupt expression node");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::constant: out += format_double(n.value); return;
    case Kind::var_x: out += 'x'; return;
    case Kind::var_y: out += 'y'; return;
    case Kind::parameter: out += n.name; return;
    case Kind::negate:
      out += "(-";
      print_node(*n.a, out);
      out += ')';
      return;
    case Kind::call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      return;
    default: break;
  }
  const char* op = nullptr;
  switch (n.kind) {
    case Kind::add: op = " + "; break;
    case Kind::subtract: op = " - "; break;
    case Kind::multiply: op = " * "; break;
    case Kind::divide: op = " / "; break;
    case Kind::power: op = "^"; break;
    default: throw ContractError("corrupt expression node");
  }
  out += '(';
  print_node(*n.a, out);
  out += op;
  print_node(*n.b, out);
  out += ')';
}

bool nodes_equal(const Node* a, const Node* b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::constant: return a->value == b->value;
    case Kind::var_x:
    case Kind::var_y: return true;
    case Kind::parameter: return a->name == b->name;
    case Kind::call:
      if (a->func != b->func) return false;
      return nodes_equal(a->a.get(), b->a.get());
    case Kind::negate: return nodes_equal(a->a.get(), b->a.get());
    default:
      return nodes_equal(a->a.get(), b->a.get()) &&
             nodes_equal(a->b.get(), b->b.get());
  }
}

void collect_parameters(const Node* n, std::vector<std::string>& out) {
  if (n == nullptr) return;
  if (n->kind == Kind::parameter) out.push_back(n->name);
  collect_parameters(n->a.get(), out);
  collect_parameters(n->b.get(), out);
}

// ---- parsing ----

struct Token {
  enum class Type {
    number,
    ident,
    plus,
    minus,
    star,
    slash,
    caret,
    lparen,
    rparen,
    end
  };

  Type type;
  std::size_t offset;
  double value = 0.0;
  std::string text;
};

std::string token_spelling(const Token& t) {
  switch (t.type) {
    case Token::Type::number: return format_double(t.value);
    case Token::Type::ident: return t.text;
    case Token::Type::plus: return "+";
    case Token::Type::minus: return "-";
    case Token::Type::star: return "*";
    case Token::Type::slash: return "/";
    case Token::Type::caret: return "^";
    case Token::Type::lparen: return "(";
    case Token::Type::rparen: return ")";
    case Token::Type::end: return "end of input";
  }
  return "?";
}

[[noreturn]] void fail(const std::string& what, std::size_t offset) {
  throw ParseError("parse error at offset " + std::to_string(offset) + ": " +
                       what,
                   offset);
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto at = [&](std::size_t k) -> char {
    return k < text.size() ? text[k] : '\0';
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(at(i + 1))))) {
      double value = 0.0;
      const char* begin = text.data() + i;
      const char* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec == std::errc::result_out_of_range)
        fail("number literal out of range", i);
      if (ec != std::errc()) fail("malformed number", i);
      out.push_back({Token::Type::number, i, value, {}});
      i = static_cast<std::size_t>(ptr - text.data());
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      out.push_back({Token::Type::ident, i, 0.0,
                     std::string(text.substr(i, j - i))});
      i = j;
      continue;
    }
    Token::Type type;
    switch (c) {
      case '+': type = Token::Type::plus; break;
      case '-': type = Token::Type::minus; break;
      case '*': type = Token::Type::star; break;
      case '/': type = Token::Type::slash; break;
      case '^': type = Token::Type::caret; break;
      case '(': type = Token::Type::lparen; break;
      case ')': type = Token::Type::rparen; break;
      default:
        fail(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({type, i, 0.0, {}});
    ++i;
  }
  out.push_back({Token::Type::end, text.size(), 0.0, {}});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::span<const std::string> params)
      : tokens_(std::move(tokens)), params_(params) {}

  ExprAst run() {
    ExprAst e = parse_expr();
    if (peek().type != Token::Type::end)
      fail("unexpected '" + token_spelling(peek()) + "'", peek().offset);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  bool accept(Token::Type t) {
    if (peek().type != t) return false;
    ++pos_;
    return true;
  }

  ExprAst parse_expr() {
    ExprAst lhs = parse_term();
    for (;;) {
      if (accept(Token::Type::plus))
        lhs = ExprAst::add(std::move(lhs), parse_term());
      else if (accept(Token::Type::minus))
        lhs = ExprAst::subtract(std::move(lhs), parse_term());
      else
        return lhs;
    }
  }

  ExprAst parse_term() {
    ExprAst lhs = parse_unary();
    for (;;) {
      if (accept(Token::Type::star))
        lhs = ExprAst::multiply(std::move(lhs), parse_unary());
      else if (accept(Token::Type::slash))
        lhs = ExprAst::divide(std::move(lhs), parse_unary());
      else
        return lhs;
    }
  }

  ExprAst parse_unary() {
    if (accept(Token::Type::minus)) return ExprAst::negate(parse_unary());
    return parse_power();
  }

  ExprAst parse_power() {
    ExprAst base = parse_primary();
    if (accept(Token::Type::caret))
      return ExprAst::power(std::move(base), parse_unary());
    return base;
  }

  ExprAst parse_primary() {
    const Token t = take();
    switch (t.type) {
      case Token::Type::number:
        return ExprAst::constant(t.value);
      case Token::Type::lparen: {
        ExprAst inner = parse_expr();
        if (!accept(Token::Type::rparen))
          fail("expected ')' but found '" + token_spelling(peek()) + "'",
               peek().offset);
        return inner;
      }
      case Token::Type::ident:
        return resolve_ident(t);
      default:
        fail("unexpected '" + token_spelling(t) + "'", t.offset);
    }
  }

  ExprAst resolve_ident(const Token& t) {
    if (auto f = func_from_name(t.text)) {
      if (!accept(Token::Type::lparen))
        fail("function '" + t.text + "' requires a parenthesized argument",
             peek().offset);
      ExprAst arg = parse_expr();
      if (!accept(Token::Type::rparen))
        fail("expected ')' but found '" + token_spelling(peek()) + "'",
             peek().offset);
      return ExprAst::call(*f, std::move(arg));
    }
    if (t.text == "x") return ExprAst::x();
    if (t.text == "y") return ExprAst::y();
    if (t.text == "pi") return ExprAst::constant(M_PI);
    if (std::find(params_.begin(), params_.end(), t.text) != params_.end())
      return ExprAst::parameter(t.text);
    fail("unknown identifier '" + t.text + "'", t.offset);
  }

  std::vector<Token> tokens_;
  std::span<const std::string> params_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprAst ExprAst::constant(double value) {
  if (!std::isfinite(value))
    throw ContractError("expression constant must be finite");
  return ExprAst(make_node({Kind::constant, value, {}, {}, nullptr, nullptr}));
}

ExprAst ExprAst::x() {
  return ExprAst(make_node({Kind::var_x, 0.0, {}, {}, nullptr, nullptr}));
}

ExprAst ExprAst::y() {
  return ExprAst(make_node({Kind::var_y, 0.0, {}, {}, nullptr, nullptr}));
}

ExprAst ExprAst::parameter(std::string name) {
  if (name.empty()) throw ContractError("parameter name must be non-empty");
  if (is_reserved(name))
    throw ContractError("parameter name '" + name + "' is reserved");
  return ExprAst(
      make_node({Kind::parameter, 0.0, std::move(name), {}, nullptr, nullptr}));
}

ExprAst ExprAst::negate(ExprAst operand) {
  if (operand.empty()) throw ContractError("negate: empty operand");
  return ExprAst(make_node(
      {Kind::negate, 0.0, {}, {}, std::move(operand.root_), nullptr}));
}

ExprAst ExprAst::add(ExprAst lhs, ExprAst rhs) {
  if (lhs.empty() || rhs.empty()) throw ContractError("add: empty operand");
  return ExprAst(make_node(
      {Kind::add, 0.0, {}, {}, std::move(lhs.root_), std::move(rhs.root_)}));
}

ExprAst ExprAst::subtract(ExprAst lhs, ExprAst rhs) {
  if (lhs.empty() || rhs.empty())
    throw ContractError("subtract: empty operand");
  return ExprAst(make_node({Kind::subtract, 0.0, {}, {}, std::move(lhs.root_),
                            std::move(rhs.root_)}));
}

ExprAst ExprAst::multiply(ExprAst lhs, ExprAst rhs) {
  if (lhs.empty() || rhs.empty())
    throw ContractError("multiply: empty operand");
  return ExprAst(make_node({Kind::multiply, 0.0, {}, {}, std::move(lhs.root_),
                            std::move(rhs.root_)}));
}

ExprAst ExprAst::divide(ExprAst lhs, ExprAst rhs) {
  if (lhs.empty() || rhs.empty()) throw ContractError("divide: empty operand");
  return ExprAst(make_node(
      {Kind::divide, 0.0, {}, {}, std::move(lhs.root_), std::move(rhs.root_)}));
}

ExprAst ExprAst::power(ExprAst base, ExprAst exponent) {
  if (base.empty() || exponent.empty())
    throw ContractError("power: empty operand");
  return ExprAst(make_node({Kind::power, 0.0, {}, {}, std::move(base.root_),
                            std::move(exponent.root_)}));
}

ExprAst ExprAst::call(Func f, ExprAst arg) {
  if (arg.empty()) throw ContractError("call: empty operand");
  return ExprAst(
      make_node({Kind::call, 0.0, {}, f, std::move(arg.root_), nullptr}));
}

double ExprAst::eval(double x, double y, const ParamPoint& params) const {
  if (root_ == nullptr) throw ContractError("eval: empty expression");
  return eval_node(*root_, x, y, params);
}

std::string ExprAst::str() const {
  if (root_ == nullptr) throw ContractError("str: empty expression");
  std::string out;
  print_node(*root_, out);
  return out;
}

bool ExprAst::same_structure(const ExprAst& other) const {
  return nodes_equal(root_.get(), other.root_.get());
}

std::vector<std::string> ExprAst::parameters() const {
  std::vector<std::string> out;
  collect_parameters(root_.get(), out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExprAst parse_expression(std::string_view text,
                         std::span<const std::string> declared_params) {
  for (const std::string& p : declared_params) {
    if (p.empty()) throw ContractError("parameter name must be non-empty");
    if (is_reserved(p))
      throw ContractError("parameter name '" + p + "' is reserved");
  }
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    fail("empty expression", 0);
  return Parser(tokenize(text), declared_params).run();
}

RealField eval_on_grid(const ExprAst& ast, const Grid2D& grid,
                       const ParamPoint& params) {
  if (ast.empty()) throw ContractError("eval_on_grid: empty expression");
  std::vector<double> samples(grid.size());
  for (int ix = 0; ix < grid.nx(); ++ix) {
    for (int iy = 0; iy < grid.ny(); ++iy) {
      const double v = ast.eval(grid.x(ix), grid.y(iy), params);
      if (!std::isfinite(v))
        throw NumericalError(
            "expression evaluates to a non-finite value at lattice index (" +
            std::to_string(ix) + ", " + std::to_string(iy) + "), x = " +
            format_double(grid.x(ix)) + ", y = " + format_double(grid.y(iy)));
      samples[grid.index(ix, iy)] = v;
    }
  }
  return RealField(grid, std::move(samples));
}

}  // namespace qmetric
