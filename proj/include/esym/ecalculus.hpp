#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "esym/estructure.hpp"

namespace esym {

class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Multi = std::vector<int>;

struct EForm {
  int degree = 0;
  std::map<Multi, Expr> coeffs;  // strictly increasing keys

  static EForm scalar(const Expr& f);
  static EForm basis(int i);  // dual generator E_i*
  Expr at(const Multi& idx) const;  // any index order; sign from sorting
  EForm& set(const Multi& idx, const Expr& c);
  std::map<Multi, double> eval(std::span<const double> q) const;
};

EForm operator+(const EForm& a, const EForm& b);
EForm operator*(const Expr& f, const EForm& a);

EForm e_differential(const EForm& form, const EFrame& frame);
EForm contraction(const std::vector<Expr>& X, const EForm& form);
EForm lie_derivative(const std::vector<Expr>& X, const EForm& form, const EFrame& frame);
double d_squared_residual(const EForm& form, const EFrame& frame, std::span<const double> q);
double max_abs_coeff(const EForm& form, std::span<const double> q);

struct LogTerm {
  int b;
  double g;
};

struct PowerTerm {
  int b;
  int k;
  Expr g;  // function of q_b only
};

// smooth + sum g log|q_b| + sum g_k(q_b) q_b^-k
struct EFunction {
  Expr smooth;
  std::vector<LogTerm> logs;
  std::vector<PowerTerm> powers;
  int nvars = 0;
  std::vector<Expr> dsmooth;

  EFunction() = default;
  EFunction(Expr smooth, int nvars, std::vector<LogTerm> logs = {},
            std::vector<PowerTerm> powers = {});

  double eval(std::span<const double> x) const;
  bool singular() const { return !logs.empty() || !powers.empty(); }
  std::string str(const std::vector<std::string>& names) const;
};

// Splits top-level log(q_b) and q_b^-k terms of an expression into the ledger.
EFunction parse_efunction(const std::string& text, const std::vector<std::string>& names,
                          const std::vector<int>& boundary);

void check_admissible(const EFunction& f, const EFrame& frame);

std::vector<double> e_function_frame_gradient(const EFunction& f, const EFrame& frame,
                                              std::span<const double> x);

}  // namespace esym
