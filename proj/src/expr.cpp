#include "esym/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace esym {

struct Node {
  Op op = Op::Const;
  double c = 0.0;
  int var = -1;
  Expr a{std::shared_ptr<const Node>()};
  Expr b{std::shared_ptr<const Node>()};
  std::shared_ptr<const OpaqueFn> fn;
};

namespace {

std::shared_ptr<const Node> const_node(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->c = c;
  return n;
}

bool is_int(double v) { return std::floor(v) == v && std::abs(v) < 1e9; }

}  // namespace

Expr::Expr() : n_(const_node(0.0)) {}
Expr::Expr(double c) : n_(const_node(c)) {}

Expr Expr::var(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = index;
  return Expr(std::shared_ptr<const Node>(n));
}

Expr Expr::opaque(OpaqueFn fn) {
  auto n = std::make_shared<Node>();
  n->op = Op::Opaque;
  n->fn = std::make_shared<const OpaqueFn>(std::move(fn));
  return Expr(std::shared_ptr<const Node>(n));
}

Op Expr::op() const { return n_->op; }
bool Expr::is_const() const { return n_->op == Op::Const; }
bool Expr::is_const(double v) const { return n_->op == Op::Const && n_->c == v; }
double Expr::value() const { return n_->c; }
int Expr::var_index() const { return n_->var; }
const Expr& Expr::lhs() const { return n_->a; }
const Expr& Expr::rhs() const { return n_->b; }

double sinc_value(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
  }
  return std::sin(x) / x;
}

double dsinc_value(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return -x / 3.0 + x * x2 / 30.0 - x * x2 * x2 / 840.0;
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

double d2sinc_value(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return -1.0 / 3.0 + x2 / 10.0 - x2 * x2 / 168.0;
  }
  return -sinc_value(x) - 2.0 * dsinc_value(x) / x;
}

namespace {

double apply_unary(Op op, double v) {
  switch (op) {
    case Op::Neg: return -v;
    case Op::Sin: return std::sin(v);
    case Op::Cos: return std::cos(v);
    case Op::Tan: return std::tan(v);
    case Op::Sec: return 1.0 / std::cos(v);
    case Op::Csc: return 1.0 / std::sin(v);
    case Op::Cot: return std::cos(v) / std::sin(v);
    case Op::Log: return std::log(v);
    case Op::Exp: return std::exp(v);
    case Op::Sqrt: return std::sqrt(v);
    case Op::Abs: return std::abs(v);
    case Op::Sinc: return sinc_value(v);
    case Op::DSinc: return dsinc_value(v);
    case Op::D2Sinc: return d2sinc_value(v);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

double apply_binary(Op op, double x, double y) {
  switch (op) {
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div: return x / y;
    case Op::Pow: return std::pow(x, y);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

Expr make_unary(Op op, const Expr& a) {
  if (a.is_const()) return Expr(apply_unary(op, a.value()));
  if (op == Op::Neg && a.op() == Op::Neg) return a.lhs();
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a;
  return Expr(std::shared_ptr<const Node>(n));
}

Expr make_binary(Op op, const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(apply_binary(op, a.value(), b.value()));
  switch (op) {
    case Op::Add:
      if (a.is_const(0.0)) return b;
      if (b.is_const(0.0)) return a;
      break;
    case Op::Sub:
      if (b.is_const(0.0)) return a;
      if (a.is_const(0.0)) return make_unary(Op::Neg, b);
      break;
    case Op::Mul:
      if (a.is_const(0.0) || b.is_const(0.0)) return Expr(0.0);
      if (a.is_const(1.0)) return b;
      if (b.is_const(1.0)) return a;
      if (a.is_const(-1.0)) return make_unary(Op::Neg, b);
      if (b.is_const(-1.0)) return make_unary(Op::Neg, a);
      break;
    case Op::Div:
      if (a.is_const(0.0)) return Expr(0.0);
      if (b.is_const(1.0)) return a;
      break;
    case Op::Pow:
      if (b.is_const(0.0)) return Expr(1.0);
      if (b.is_const(1.0)) return a;
      break;
    default:
      break;
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a;
  n->b = b;
  return Expr(std::shared_ptr<const Node>(n));
}

Expr operator+(const Expr& a, const Expr& b) { return make_binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return make_binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return make_binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return make_binary(Op::Div, a, b); }
Expr operator-(const Expr& a) { return make_unary(Op::Neg, a); }
Expr pow(const Expr& a, const Expr& b) { return make_binary(Op::Pow, a, b); }
Expr sin(const Expr& a) { return make_unary(Op::Sin, a); }
Expr cos(const Expr& a) { return make_unary(Op::Cos, a); }
Expr tan(const Expr& a) { return make_unary(Op::Tan, a); }
Expr sec(const Expr& a) { return make_unary(Op::Sec, a); }
Expr csc(const Expr& a) { return make_unary(Op::Csc, a); }
Expr cot(const Expr& a) { return make_unary(Op::Cot, a); }
Expr log(const Expr& a) { return make_unary(Op::Log, a); }
Expr exp(const Expr& a) { return make_unary(Op::Exp, a); }
Expr sqrt(const Expr& a) { return make_unary(Op::Sqrt, a); }
Expr abs(const Expr& a) { return make_unary(Op::Abs, a); }
Expr sinc(const Expr& a) { return make_unary(Op::Sinc, a); }

double Expr::eval(std::span<const double> x) const {
  const Node& n = *n_;
  switch (n.op) {
    case Op::Const: return n.c;
    case Op::Var: return x[static_cast<std::size_t>(n.var)];
    case Op::Opaque: return n.fn->f(x);
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
      return apply_binary(n.op, n.a.eval(x), n.b.eval(x));
    default:
      return apply_unary(n.op, n.a.eval(x));
  }
}

double central_difference(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x, int index, double h_scale) {
  std::vector<double> y(x.begin(), x.end());
  const auto i = static_cast<std::size_t>(index);
  const double h = h_scale * std::max(1.0, std::abs(y[i]));
  const double x0 = y[i];
  y[i] = x0 + h;
  const double fp = f(y);
  y[i] = x0 - h;
  const double fm = f(y);
  return (fp - fm) / (2.0 * h);
}

namespace {

Expr numeric_partial(const Expr& e, int index) {
  OpaqueFn fn;
  fn.name = "d" + std::to_string(index) + "(" + e.str() + ")";
  fn.f = [e, index](std::span<const double> x) {
    return central_difference([&e](std::span<const double> y) { return e.eval(y); }, x, index);
  };
  bool all = false;
  auto v = e.vars(&all);
  if (!all) fn.deps.assign(v.begin(), v.end());
  return Expr::opaque(std::move(fn));
}

}  // namespace

Expr Expr::diff(int index) const {
  const Node& n = *n_;
  const Expr& a = n.a;
  const Expr& b = n.b;
  switch (n.op) {
    case Op::Const: return Expr(0.0);
    case Op::Var: return Expr(n.var == index ? 1.0 : 0.0);
    case Op::Add: return a.diff(index) + b.diff(index);
    case Op::Sub: return a.diff(index) - b.diff(index);
    case Op::Mul: return a.diff(index) * b + a * b.diff(index);
    case Op::Div: return a.diff(index) / b - a * b.diff(index) / (b * b);
    case Op::Pow:
      if (b.is_const()) return Expr(b.value()) * pow(a, Expr(b.value() - 1.0)) * a.diff(index);
      return *this * (b.diff(index) * log(a) + b * a.diff(index) / a);
    case Op::Neg: return -a.diff(index);
    case Op::Sin: return cos(a) * a.diff(index);
    case Op::Cos: return -(sin(a) * a.diff(index));
    case Op::Tan: return pow(sec(a), Expr(2.0)) * a.diff(index);
    case Op::Sec: return sec(a) * tan(a) * a.diff(index);
    case Op::Csc: return -(csc(a) * cot(a) * a.diff(index));
    case Op::Cot: return -(pow(csc(a), Expr(2.0)) * a.diff(index));
    case Op::Log: return a.diff(index) / a;
    case Op::Exp: return exp(a) * a.diff(index);
    case Op::Sqrt: return a.diff(index) / (Expr(2.0) * sqrt(a));
    case Op::Abs: return a.diff(index) * a / abs(a);
    case Op::Sinc: return make_unary(Op::DSinc, a) * a.diff(index);
    case Op::DSinc: return make_unary(Op::D2Sinc, a) * a.diff(index);
    case Op::D2Sinc: {
      Expr da = a.diff(index);
      if (da.is_const(0.0)) return Expr(0.0);
      return numeric_partial(*this, index);
    }
    case Op::Opaque: {
      if (!n.fn->deps.empty() &&
          std::find(n.fn->deps.begin(), n.fn->deps.end(), index) == n.fn->deps.end())
        return Expr(0.0);
      const auto i = static_cast<std::size_t>(index);
      if (i < n.fn->partials.size()) return n.fn->partials[i];
      return numeric_partial(*this, index);
    }
  }
  return Expr(0.0);
}

std::set<int> Expr::vars(bool* opaque_all) const {
  std::set<int> out;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    const Node& n = *e.n_;
    switch (n.op) {
      case Op::Const: return;
      case Op::Var: out.insert(n.var); return;
      case Op::Opaque:
        if (n.fn->deps.empty()) {
          if (opaque_all) *opaque_all = true;
        } else {
          out.insert(n.fn->deps.begin(), n.fn->deps.end());
        }
        return;
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
        walk(n.a);
        walk(n.b);
        return;
      default:
        walk(n.a);
    }
  };
  walk(*this);
  return out;
}

namespace {

const char* unary_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Sec: return "sec";
    case Op::Csc: return "csc";
    case Op::Cot: return "cot";
    case Op::Log: return "log";
    case Op::Exp: return "exp";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Sinc: return "sinc";
    case Op::DSinc: return "dsinc";
    case Op::D2Sinc: return "d2sinc";
    default: return "?";
  }
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string Expr::str(const std::vector<std::string>& names) const {
  const Node& n = *n_;
  switch (n.op) {
    case Op::Const: return n.c < 0 ? "(" + fmt_num(n.c) + ")" : fmt_num(n.c);
    case Op::Var:
      if (n.var >= 0 && static_cast<std::size_t>(n.var) < names.size())
        return names[static_cast<std::size_t>(n.var)];
      return "x" + std::to_string(n.var);
    case Op::Opaque: return n.fn->name;
    case Op::Add: return "(" + n.a.str(names) + " + " + n.b.str(names) + ")";
    case Op::Sub: return "(" + n.a.str(names) + " - " + n.b.str(names) + ")";
    case Op::Mul: return n.a.str(names) + "*" + n.b.str(names);
    case Op::Div: return n.a.str(names) + "/(" + n.b.str(names) + ")";
    case Op::Pow: return "(" + n.a.str(names) + ")^" + n.b.str(names);
    case Op::Neg: return "(-" + n.a.str(names) + ")";
    default: return std::string(unary_name(n.op)) + "(" + n.a.str(names) + ")";
  }
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& names)
      : s_(text), names_(names) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse expression \"" + s_ + "\" at column " +
                     std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (eat('+')) e = e + term();
      else if (eat('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (eat('*')) e = e * unary();
      else if (eat('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (eat('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_'))
        id += s_[pos_++];
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        ++pos_;
        Expr arg = expr();
        if (!eat(')')) fail("expected ')' after argument of " + id);
        return call(id, arg);
      }
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == id) return Expr::var(static_cast<int>(i));
      if (id == "pi") return Expr(M_PI);
      if (id == "e") return Expr(M_E);
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return Expr(v);
  }

  Expr call(const std::string& f, const Expr& a) {
    if (f == "sin") return sin(a);
    if (f == "cos") return cos(a);
    if (f == "tan") return tan(a);
    if (f == "sec") return sec(a);
    if (f == "csc") return csc(a);
    if (f == "cot") return cot(a);
    if (f == "log") return log(a);
    if (f == "exp") return exp(a);
    if (f == "sqrt") return sqrt(a);
    if (f == "abs") return abs(a);
    if (f == "sinc") return sinc(a);
    fail("unknown function '" + f + "'");
  }

  std::string s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text, const std::vector<std::string>& names) {
  return Parser(text, names).run();
}

// ---------------------------------------------------------------- factoring

namespace {

constexpr int kInfPower = 1 << 20;

// e = q_b^k * rest
std::pair<int, Expr> power_split(const Expr& e, int b) {
  switch (e.op()) {
    case Op::Const:
      if (e.is_const(0.0)) return {kInfPower, Expr(0.0)};
      return {0, e};
    case Op::Var:
      if (e.var_index() == b) return {1, Expr(1.0)};
      return {0, e};
    case Op::Pow:
      if (e.lhs().op() == Op::Var && e.lhs().var_index() == b && e.rhs().is_const() &&
          is_int(e.rhs().value()) && e.rhs().value() >= 0)
        return {static_cast<int>(e.rhs().value()), Expr(1.0)};
      if (e.rhs().is_const() && is_int(e.rhs().value()) && e.rhs().value() >= 1) {
        auto [k, r] = power_split(e.lhs(), b);
        const int c = static_cast<int>(e.rhs().value());
        if (k > 0 && k < kInfPower) return {k * c, pow(r, Expr(static_cast<double>(c)))};
      }
      return {0, e};
    case Op::Neg: {
      auto [k, r] = power_split(e.lhs(), b);
      return {k, -r};
    }
    case Op::Mul: {
      auto [k1, r1] = power_split(e.lhs(), b);
      auto [k2, r2] = power_split(e.rhs(), b);
      if (k1 >= kInfPower || k2 >= kInfPower) return {kInfPower, Expr(0.0)};
      return {k1 + k2, r1 * r2};
    }
    case Op::Div: {
      auto [k1, r1] = power_split(e.lhs(), b);
      auto dv = e.rhs().vars();
      if (dv.count(b)) return {0, e};
      return {k1, k1 >= kInfPower ? Expr(0.0) : r1 / e.rhs()};
    }
    case Op::Add: case Op::Sub: {
      auto [k1, r1] = power_split(e.lhs(), b);
      auto [k2, r2] = power_split(e.rhs(), b);
      if (k1 >= kInfPower) return {k2, e.op() == Op::Add ? r2 : -r2};
      if (k2 >= kInfPower) return {k1, r1};
      const int k = std::min(k1, k2);
      const Expr q = Expr::var(b);
      Expr a1 = k1 > k ? r1 * pow(q, Expr(static_cast<double>(k1 - k))) : r1;
      Expr a2 = k2 > k ? r2 * pow(q, Expr(static_cast<double>(k2 - k))) : r2;
      return {k, e.op() == Op::Add ? a1 + a2 : a1 - a2};
    }
    default:
      return {0, e};
  }
}

}  // namespace

bool divide_by_power(const Expr& e, int b, int m, Expr& out) {
  auto [k, rest] = power_split(e, b);
  if (k >= kInfPower) {
    out = Expr(0.0);
    return true;
  }
  if (k < m) return false;
  out = k == m ? rest : rest * pow(Expr::var(b), Expr(static_cast<double>(k - m)));
  return true;
}

double check_partials(const Expr& e, std::span<const double> x, double h_scale) {
  bool all = false;
  auto vs = e.vars(&all);
  if (all)
    for (std::size_t i = 0; i < x.size(); ++i) vs.insert(static_cast<int>(i));
  double worst = 0.0;
  for (int i : vs) {
    if (i < 0 || static_cast<std::size_t>(i) >= x.size()) continue;
    const double an = e.diff(i).eval(x);
    const double fd =
        central_difference([&e](std::span<const double> y) { return e.eval(y); }, x, i, h_scale);
    worst = std::max(worst, std::abs(an - fd) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

}  // namespace esym
