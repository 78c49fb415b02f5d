#include "oscpair/qfunc.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "oscpair/error.hpp"

namespace oscpair {

EquationModel::EquationModel(std::string name, Params params, double x0, Evaluator eval,
                             std::string source, bool positive_domain)
    : name_(std::move(name)),
      params_(std::move(params)),
      x0_(x0),
      eval_(std::move(eval)),
      source_(std::move(source)),
      positive_domain_(positive_domain) {
  if (!std::isfinite(x0_)) throw ConfigError("x0 must be finite");
  if (positive_domain_ && !(x0_ > 0.0)) {
    throw ConfigError("equation '" + name_ + "' is singular at the origin; x0 must be > 0");
  }
}

double EquationModel::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw ConfigError("equation '" + name_ + "' has no parameter '" + key + "'");
  return it->second;
}

EquationModel EquationModel::with_x0(double x0) const {
  EquationModel copy = *this;
  if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
  if (positive_domain_ && !(x0 > 0.0)) {
    throw ConfigError("equation '" + name_ + "' is singular at the origin; x0 must be > 0");
  }
  copy.x0_ = x0;
  return copy;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

double take_param(const Params& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::string& name, const Params& params,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("equation '" + name + "' does not take parameter '" + key + "'");
    if (!std::isfinite(value)) throw ConfigError("parameter '" + key + "' must be finite");
  }
}

}  // namespace

bool is_catalog_name(const std::string& name) {
  return name == "constant" || name == "gen-airy" || name == "inverse-x" || name == "cauchy-euler";
}

EquationModel catalog_get(const std::string& name, const Params& params) {
  EquationModel model = [&]() -> EquationModel {
    if (name == "constant") {
      reject_unknown(name, params, {"c"});
      const double c = take_param(params, "c", 1.0);
      if (!(c > 0.0)) throw ConfigError("constant: c must be > 0 for an oscillatory equation");
      return {name, {{"c", c}}, 0.0, [c](double) { return QValues{c, 0.0, 0.0}; }, "c"};
    }
    if (name == "gen-airy") {
      reject_unknown(name, params, {"nu"});
      const double nu = take_param(params, "nu", 1.0 / 3.0);
      if (!(nu > 0.0 && nu <= 0.5)) throw ConfigError("gen-airy: nu must lie in (0, 1/2]");
      const double k = 1.0 / (4.0 * nu * nu);
      const double p = 1.0 / nu - 2.0;
      auto eval = [k, p](double x) {
        if (p == 0.0) return QValues{k, 0.0, 0.0};
        const double xp = std::pow(x, p);
        return QValues{k * xp, k * p * xp / x, k * p * (p - 1.0) * xp / (x * x)};
      };
      return {name, {{"nu", nu}}, 1.0, eval, "(2*nu)^(-2) * x^(1/nu - 2)", true};
    }
    if (name == "inverse-x") {
      reject_unknown(name, params, {});
      auto eval = [](double x) {
        const double r = 1.0 / x;
        return QValues{r, -r * r, 2.0 * r * r * r};
      };
      return {name, {}, 1.0, eval, "1/x", true};
    }
    if (name == "cauchy-euler") {
      reject_unknown(name, params, {"gamma"});
      const double gamma = take_param(params, "gamma", 1.0);
      const double g2 = gamma * gamma;
      if (!(g2 > 0.25)) throw ConfigError("cauchy-euler: gamma^2 must exceed 1/4 for an oscillatory equation");
      const double s = std::sqrt(g2 - 0.25);
      auto eval = [g2](double x) {
        const double r = 1.0 / x;
        const double r2 = r * r;
        return QValues{g2 * r2, -2.0 * g2 * r2 * r, 6.0 * g2 * r2 * r2};
      };
      return {name, {{"gamma", gamma}, {"s", s}}, 1.0, eval, "gamma^2/x^2", true};
    }
    throw ConfigError("unknown equation '" + name +
                      "' (expected constant, gen-airy, inverse-x or cauchy-euler)");
  }();
  model.catalog_ = true;
  return model;
}

// ---------------------------------------------------------------------------
// Expression parser with second-order forward differentiation

namespace {

// Value with first and second derivative in x.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2}; }
Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

// f(g) given f, f', f'' evaluated at g.v
Jet chain(const Jet& g, double f0, double f1, double f2) {
  return {f0, f1 * g.d1, f2 * g.d1 * g.d1 + f1 * g.d2};
}

[[noreturn]] void eval_fail(const std::string& what, double x) {
  throw NumericError("expression evaluation failed at x = " + std::to_string(x) + ": " + what);
}

Jet reciprocal(const Jet& g, double x) {
  if (g.v == 0.0) eval_fail("division by zero", x);
  const double r = 1.0 / g.v;
  return chain(g, r, -r * r, 2.0 * r * r * r);
}

enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Sqrt, Abs };

struct Node {
  Op op;
  double value = 0.0;  // Num
  std::shared_ptr<const Node> a, b;
  bool depends_on_x = false;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Num;
  n->value = v;
  return n;
}

NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->depends_on_x = (a && a->depends_on_x) || (b && b->depends_on_x);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Jet eval_node(const Node& n, double x);

Jet eval_pow(const Node& n, double x) {
  const Jet base = eval_node(*n.a, x);
  const Jet expo = eval_node(*n.b, x);
  if (!n.b->depends_on_x) {
    const double b = expo.v;
    const bool integral = std::nearbyint(b) == b && std::abs(b) < 1e9;
    if (!integral && !(base.v > 0.0)) eval_fail("non-integer power of a non-positive base", x);
    if (base.v == 0.0) {
      if (b < 0.0) eval_fail("division by zero (negative power of 0)", x);
      if (b == 0.0) return {1.0, 0.0, 0.0};
      // integral b >= 1: a^b, b a^(b-1), b(b-1) a^(b-2) with 0^0 = 1
      const double f1 = b == 1.0 ? 1.0 : 0.0;
      const double f2 = b == 2.0 ? 2.0 : 0.0;
      return chain(base, 0.0, f1, f2);
    }
    const double f0 = std::pow(base.v, b);
    const double f1 = b * f0 / base.v;
    const double f2 = (b - 1.0) * f1 / base.v;
    return chain(base, f0, f1, f2);
  }
  if (!(base.v > 0.0)) eval_fail("x-dependent power of a non-positive base", x);
  // exp(b log a)
  const Jet lg = chain(base, std::log(base.v), 1.0 / base.v, -1.0 / (base.v * base.v));
  const Jet e = expo * lg;
  const double ev = std::exp(e.v);
  return chain(e, ev, ev, ev);
}

Jet eval_node(const Node& n, double x) {
  switch (n.op) {
    case Op::Num:
      return {n.value, 0.0, 0.0};
    case Op::Var:
      return {x, 1.0, 0.0};
    case Op::Neg:
      return -eval_node(*n.a, x);
    case Op::Add:
      return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Op::Sub:
      return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Op::Mul:
      return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Op::Div:
      return eval_node(*n.a, x) * reciprocal(eval_node(*n.b, x), x);
    case Op::Pow:
      return eval_pow(n, x);
    case Op::Sin: {
      const Jet g = eval_node(*n.a, x);
      const double s = std::sin(g.v), c = std::cos(g.v);
      return chain(g, s, c, -s);
    }
    case Op::Cos: {
      const Jet g = eval_node(*n.a, x);
      const double s = std::sin(g.v), c = std::cos(g.v);
      return chain(g, c, -s, -c);
    }
    case Op::Exp: {
      const Jet g = eval_node(*n.a, x);
      const double e = std::exp(g.v);
      return chain(g, e, e, e);
    }
    case Op::Log: {
      const Jet g = eval_node(*n.a, x);
      if (!(g.v > 0.0)) eval_fail("log of a non-positive value", x);
      return chain(g, std::log(g.v), 1.0 / g.v, -1.0 / (g.v * g.v));
    }
    case Op::Sqrt: {
      const Jet g = eval_node(*n.a, x);
      if (!(g.v > 0.0)) eval_fail("sqrt of a non-positive value (derivative undefined)", x);
      const double r = std::sqrt(g.v);
      return chain(g, r, 0.5 / r, -0.25 / (r * g.v));
    }
    case Op::Abs: {
      const Jet g = eval_node(*n.a, x);
      if (g.v == 0.0) eval_fail("abs at 0 (derivative undefined)", x);
      const double sgn = g.v > 0.0 ? 1.0 : -1.0;
      return chain(g, std::abs(g.v), sgn, 0.0);
    }
  }
  eval_fail("corrupt expression tree", x);
}

class Parser {
 public:
  Parser(const std::string& text, const Params& params) : text_(text), params_(params) {}

  NodePtr parse() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return root;
  }

 private:
  // expr := term (('+'|'-') term)*
  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = make_node(Op::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  // term := unary (('*'|'/') unary)*
  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = make_node(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_node(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // unary := '-' unary | power   (so -x^2 is -(x^2))
  NodePtr parse_unary() {
    skip_ws();
    if (accept('-')) return make_node(Op::Neg, parse_unary());
    return parse_power();
  }

  // power := primary ('^' unary)?   (right-associative)
  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (accept('^')) return make_node(Op::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string ident = text_.substr(start, pos_ - start);
      skip_ws();
      if (accept('(')) {
        const Op op = function_op(ident, start);
        NodePtr arg = parse_expr();
        skip_ws();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make_node(op, arg);
      }
      if (ident == "x") {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->depends_on_x = true;
        return n;
      }
      if (auto it = params_.find(ident); it != params_.end()) return make_num(it->second);
      if (ident == "pi") return make_num(std::numbers::pi);
      throw ConfigError("unbound identifier '" + ident + "' at offset " + std::to_string(start));
    }
    if (accept('(')) {
      NodePtr inner = parse_expr();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    throw ParseError("unexpected '" + std::string(1, ch) + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string lexeme = text_.substr(start, pos_ - start);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(lexeme, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + lexeme + "'", start);
    }
    if (used != lexeme.size()) throw ParseError("malformed number '" + lexeme + "'", start);
    return make_num(value);
  }

  Op function_op(const std::string& name, std::size_t at) const {
    if (name == "sin") return Op::Sin;
    if (name == "cos") return Op::Cos;
    if (name == "exp") return Op::Exp;
    if (name == "log") return Op::Log;
    if (name == "sqrt") return Op::Sqrt;
    if (name == "abs") return Op::Abs;
    throw ParseError("unknown function '" + name + "'", at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  const Params& params_;
  std::size_t pos_ = 0;
};

}  // namespace

EquationModel parse_q(const std::string& text, const Params& params, double x0) {
  for (const auto& [key, value] : params) {
    if (key == "x") throw ConfigError("'x' is the independent variable and cannot be a parameter");
    if (!std::isfinite(value)) throw ConfigError("parameter '" + key + "' must be finite");
  }
  NodePtr root = Parser(text, params).parse();
  auto eval = [root](double x) {
    const Jet j = eval_node(*root, x);
    if (!std::isfinite(j.v) || !std::isfinite(j.d1) || !std::isfinite(j.d2)) {
      eval_fail("non-finite value", x);
    }
    return QValues{j.v, j.d1, j.d2};
  };
  return {"expr", params, x0, eval, text};
}

}  // namespace oscpair
