#pragma once

#include <functional>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace esym {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Op {
  Const, Var, Add, Sub, Mul, Div, Pow, Neg,
  Sin, Cos, Tan, Sec, Csc, Cot, Log, Exp, Sqrt, Abs,
  Sinc, DSinc, D2Sinc, Opaque
};

class Expr;

// Black-box scalar function of the whole variable vector.
struct OpaqueFn {
  std::string name;
  std::function<double(std::span<const double>)> f;
  std::vector<Expr> partials;  // empty: central differences
  std::vector<int> deps;       // empty: depends on everything
};

struct Node;

class Expr {
 public:
  Expr();
  Expr(double c);  // NOLINT(google-explicit-constructor)

  static Expr var(int index);
  static Expr opaque(OpaqueFn fn);

  double eval(std::span<const double> x) const;
  Expr diff(int index) const;

  Op op() const;
  bool is_const() const;
  bool is_const(double v) const;
  double value() const;
  int var_index() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  // variables the expression may depend on; nullopt-like flag for opaque
  std::set<int> vars(bool* opaque_all = nullptr) const;
  std::string str(const std::vector<std::string>& names = {}) const;

  const Node* node() const { return n_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
  friend struct Node;
  friend Expr make_binary(Op, const Expr&, const Expr&);
  friend Expr make_unary(Op, const Expr&);
};

Expr make_binary(Op op, const Expr& a, const Expr& b);
Expr make_unary(Op op, const Expr& a);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr sec(const Expr& a);
Expr csc(const Expr& a);
Expr cot(const Expr& a);
Expr log(const Expr& a);
Expr exp(const Expr& a);
Expr sqrt(const Expr& a);
Expr abs(const Expr& a);
Expr sinc(const Expr& a);

double sinc_value(double x);
double dsinc_value(double x);
double d2sinc_value(double x);

// Grammar: + - * / ^, unary minus, parentheses, numbers, the functions
// sin cos tan sec csc cot log exp sqrt abs sinc, constants pi and e.
Expr parse(const std::string& text, const std::vector<std::string>& names);

// Splits off a factor q_b^m when it can be done symbolically.
bool divide_by_power(const Expr& e, int b, int m, Expr& out);

// Maximum relative mismatch between analytic partials and central differences.
double check_partials(const Expr& e, std::span<const double> x, double h_scale = 1e-5);

double central_difference(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x, int index, double h_scale = 1e-5);

}  // namespace esym
