#include "esym/ecalculus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace esym {

namespace {

// sorts in place; returns parity sign, 0 on repeated index
int sort_sign(Multi& idx) {
  int sign = 1;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b + 1 < idx.size() - a; ++b)
      if (idx[b] > idx[b + 1]) {
        std::swap(idx[b], idx[b + 1]);
        sign = -sign;
      }
  for (std::size_t a = 0; a + 1 < idx.size(); ++a)
    if (idx[a] == idx[a + 1]) return 0;
  return sign;
}

void combinations(int p, int k, const std::function<void(const Multi&)>& visit) {
  if (k > p || k < 0) return;
  Multi c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  for (;;) {
    visit(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == p - k + i) --i;
    if (i < 0) return;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

Multi without(const Multi& I, std::size_t a) {
  Multi out;
  for (std::size_t i = 0; i < I.size(); ++i)
    if (i != a) out.push_back(I[i]);
  return out;
}

}  // namespace

EForm EForm::scalar(const Expr& f) {
  EForm w;
  w.degree = 0;
  w.coeffs[{}] = f;
  return w;
}

EForm EForm::basis(int i) {
  EForm w;
  w.degree = 1;
  w.coeffs[{i}] = Expr(1.0);
  return w;
}

Expr EForm::at(const Multi& idx) const {
  Multi s = idx;
  const int sign = sort_sign(s);
  if (sign == 0) return Expr(0.0);
  auto it = coeffs.find(s);
  if (it == coeffs.end()) return Expr(0.0);
  return sign > 0 ? it->second : -it->second;
}

EForm& EForm::set(const Multi& idx, const Expr& c) {
  Multi s = idx;
  const int sign = sort_sign(s);
  if (static_cast<int>(s.size()) != degree) throw std::invalid_argument("form index length != degree");
  if (sign == 0) throw std::invalid_argument("repeated index in form coefficient");
  coeffs[s] = sign > 0 ? c : -c;
  return *this;
}

std::map<Multi, double> EForm::eval(std::span<const double> q) const {
  std::map<Multi, double> out;
  for (const auto& [k, c] : coeffs) out[k] = c.eval(q);
  return out;
}

EForm operator+(const EForm& a, const EForm& b) {
  if (a.degree != b.degree) throw std::invalid_argument("adding forms of different degree");
  EForm out = a;
  for (const auto& [k, c] : b.coeffs) {
    auto it = out.coeffs.find(k);
    if (it == out.coeffs.end()) out.coeffs[k] = c;
    else it->second = it->second + c;
  }
  return out;
}

EForm operator*(const Expr& f, const EForm& a) {
  EForm out;
  out.degree = a.degree;
  for (const auto& [k, c] : a.coeffs) out.coeffs[k] = f * c;
  return out;
}

EForm e_differential(const EForm& form, const EFrame& frame) {
  EForm out;
  out.degree = form.degree + 1;
  const int p = frame.p;
  combinations(p, out.degree, [&](const Multi& I) {
    Expr c(0.0);
    for (std::size_t a = 0; a < I.size(); ++a) {
      Expr t = frame.apply(I[a], form.at(without(I, a)));
      c = (a % 2 == 0) ? c + t : c - t;
    }
    for (std::size_t a = 0; a < I.size(); ++a) {
      for (std::size_t b = a + 1; b < I.size(); ++b) {
        Multi rest = without(without(I, b), a);
        Expr t(0.0);
        for (int l = 0; l < p; ++l) {
          const Expr& cab = frame.C[I[a]][I[b]][l];
          if (cab.is_const(0.0)) continue;
          Multi key = {l};
          key.insert(key.end(), rest.begin(), rest.end());
          t = t + cab * form.at(key);
        }
        c = ((a + b) % 2 == 0) ? c + t : c - t;
      }
    }
    if (!c.is_const(0.0)) out.coeffs[I] = c;
  });
  return out;
}

EForm contraction(const std::vector<Expr>& X, const EForm& form) {
  EForm out;
  if (form.degree == 0) {
    out.degree = 0;
    return out;
  }
  out.degree = form.degree - 1;
  const int p = static_cast<int>(X.size());
  combinations(p, out.degree, [&](const Multi& J) {
    Expr c(0.0);
    for (int i = 0; i < p; ++i) {
      if (X[static_cast<std::size_t>(i)].is_const(0.0)) continue;
      Multi key = {i};
      key.insert(key.end(), J.begin(), J.end());
      c = c + X[static_cast<std::size_t>(i)] * form.at(key);
    }
    if (!c.is_const(0.0)) out.coeffs[J] = c;
  });
  return out;
}

EForm lie_derivative(const std::vector<Expr>& X, const EForm& form, const EFrame& frame) {
  EForm b = contraction(X, e_differential(form, frame));
  if (form.degree == 0) return b;
  return e_differential(contraction(X, form), frame) + b;
}

double max_abs_coeff(const EForm& form, std::span<const double> q) {
  double worst = 0.0;
  for (const auto& [k, c] : form.coeffs) worst = std::max(worst, std::abs(c.eval(q)));
  return worst;
}

double d_squared_residual(const EForm& form, const EFrame& frame, std::span<const double> q) {
  frame.chart.require(q);
  return max_abs_coeff(e_differential(e_differential(form, frame), frame), q);
}

// ---------------------------------------------------------------- E-functions

EFunction::EFunction(Expr s, int n, std::vector<LogTerm> l, std::vector<PowerTerm> pw)
    : smooth(std::move(s)), logs(std::move(l)), powers(std::move(pw)), nvars(n) {
  dsmooth.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) dsmooth.push_back(smooth.diff(j));
  for (auto& t : powers)
    if (t.k < 1) throw AdmissibilityError("power term exponent must be >= 1");
}

double EFunction::eval(std::span<const double> x) const {
  double v = smooth.eval(x);
  for (const auto& t : logs) v += t.g * std::log(std::abs(x[static_cast<std::size_t>(t.b)]));
  for (const auto& t : powers) {
    const double qb = x[static_cast<std::size_t>(t.b)];
    v += t.g.eval(x) * std::pow(qb, -t.k);
  }
  return v;
}

std::string EFunction::str(const std::vector<std::string>& names) const {
  std::string s = smooth.str(names);
  for (const auto& t : logs)
    s += " + " + std::to_string(t.g) + "*log|" + names.at(static_cast<std::size_t>(t.b)) + "|";
  for (const auto& t : powers)
    s += " + " + t.g.str(names) + "*" + names.at(static_cast<std::size_t>(t.b)) + "^-" +
         std::to_string(t.k);
  return s;
}

namespace {

void flatten_sum(const Expr& e, double sign, std::vector<std::pair<double, Expr>>& out) {
  if (e.op() == Op::Add) {
    flatten_sum(e.lhs(), sign, out);
    flatten_sum(e.rhs(), sign, out);
  } else if (e.op() == Op::Sub) {
    flatten_sum(e.lhs(), sign, out);
    flatten_sum(e.rhs(), -sign, out);
  } else if (e.op() == Op::Neg) {
    flatten_sum(e.lhs(), -sign, out);
  } else {
    out.emplace_back(sign, e);
  }
}

// factors with integer exponents (denominators get negated exponents)
void flatten_product(const Expr& e, double expo, std::vector<std::pair<Expr, double>>& out) {
  if (e.op() == Op::Mul) {
    flatten_product(e.lhs(), expo, out);
    flatten_product(e.rhs(), expo, out);
  } else if (e.op() == Op::Div) {
    flatten_product(e.lhs(), expo, out);
    flatten_product(e.rhs(), -expo, out);
  } else if (e.op() == Op::Pow && e.rhs().is_const() &&
             std::floor(e.rhs().value()) == e.rhs().value()) {
    flatten_product(e.lhs(), expo * e.rhs().value(), out);
  } else {
    out.emplace_back(e, expo);
  }
}

bool is_var(const Expr& e, int& idx) {
  if (e.op() == Op::Var) {
    idx = e.var_index();
    return true;
  }
  return false;
}

bool is_log_of_var(const Expr& e, int& idx) {
  if (e.op() != Op::Log) return false;
  const Expr& a = e.lhs();
  if (is_var(a, idx)) return true;
  return a.op() == Op::Abs && is_var(a.lhs(), idx);
}

Expr rebuild(const std::vector<std::pair<Expr, double>>& fs) {
  Expr out(1.0);
  for (const auto& [f, x] : fs) {
    if (x == 1.0) out = out * f;
    else if (x == -1.0) out = out / f;
    else out = out * pow(f, Expr(x));
  }
  return out;
}

}  // namespace

EFunction parse_efunction(const std::string& text, const std::vector<std::string>& names,
                          const std::vector<int>& boundary) {
  const Expr e = parse(text, names);
  auto on_boundary = [&](int b) {
    return std::find(boundary.begin(), boundary.end(), b) != boundary.end();
  };
  std::vector<std::pair<double, Expr>> terms;
  flatten_sum(e, 1.0, terms);
  Expr smooth(0.0);
  std::vector<LogTerm> logs;
  std::vector<PowerTerm> powers;
  for (const auto& [sign, t] : terms) {
    std::vector<std::pair<Expr, double>> fs;
    flatten_product(t, 1.0, fs);
    // log term: constant * log(q_b)
    int lb = -1;
    double coef = sign;
    bool only_const = true;
    int nlog = 0;
    for (const auto& [f, x] : fs) {
      int b = -1;
      if (x == 1.0 && is_log_of_var(f, b) && on_boundary(b)) {
        ++nlog;
        lb = b;
      } else if (f.is_const()) {
        coef *= std::pow(f.value(), x);
      } else {
        only_const = false;
      }
    }
    if (nlog == 1 && only_const) {
      logs.push_back({lb, coef});
      continue;
    }
    // power term: g(q_b) * q_b^-k
    bool handled = false;
    for (int b : boundary) {
      double net = 0.0;
      std::vector<std::pair<Expr, double>> rest;
      bool single_var = true;
      for (const auto& [f, x] : fs) {
        int v = -1;
        if (is_var(f, v) && v == b) {
          net += x;
        } else {
          auto vs = f.vars();
          bool all = false;
          f.vars(&all);
          if (all || !(vs.empty() || (vs.size() == 1 && *vs.begin() == b))) single_var = false;
          rest.emplace_back(f, x);
        }
      }
      if (net < 0 && single_var && std::floor(net) == net) {
        powers.push_back({b, static_cast<int>(-net), Expr(sign) * rebuild(rest)});
        handled = true;
        break;
      }
    }
    if (handled) continue;
    smooth = sign > 0 ? smooth + t : smooth - t;
  }
  return EFunction(smooth, static_cast<int>(names.size()), logs, powers);
}

void check_admissible(const EFunction& f, const EFrame& frame) {
  auto order_of = [&](int b) {
    auto it = frame.order.find(b);
    if (it == frame.order.end())
      throw AdmissibilityError("singular term in coordinate " + std::to_string(b) +
                               " which is not a boundary function of the frame");
    return it->second;
  };
  for (const auto& t : f.logs) order_of(t.b);
  for (const auto& t : f.powers) {
    const int m = order_of(t.b);
    if (t.k > m - 1)
      throw AdmissibilityError("power term q^-" + std::to_string(t.k) +
                               " exceeds the admissible order " + std::to_string(m - 1) +
                               " for a b^" + std::to_string(m) + " boundary");
    bool all = false;
    auto vs = t.g.vars(&all);
    if (all || vs.size() > 1 || (vs.size() == 1 && *vs.begin() != t.b))
      throw AdmissibilityError("power-term coefficient must depend on its boundary coordinate only");
  }
}

std::vector<double> e_function_frame_gradient(const EFunction& f, const EFrame& frame,
                                              std::span<const double> x) {
  frame.chart.require(x);
  check_admissible(f, frame);
  std::vector<double> g(static_cast<std::size_t>(frame.p), 0.0);
  for (int i = 0; i < frame.p; ++i) g[static_cast<std::size_t>(i)] = frame.apply_value(i, f.dsmooth, x);
  for (const auto& t : f.logs) {
    const int m = frame.order.at(t.b);
    const double qb = x[static_cast<std::size_t>(t.b)];
    const double qm = m == 1 ? 1.0 : std::pow(qb, m - 1);
    for (int i = 0; i < frame.p; ++i) {
      const Expr& s = frame.sigma[i][t.b];
      if (s.is_const(0.0)) continue;
      g[static_cast<std::size_t>(i)] += t.g * s.eval(x) * qm;
    }
  }
  for (const auto& t : f.powers) {
    const int m = frame.order.at(t.b);
    const double qb = x[static_cast<std::size_t>(t.b)];
    const double gk = t.g.eval(x);
    const double dg = t.g.diff(t.b).eval(x);
    const double term = dg * std::pow(qb, m - t.k) - t.k * gk * std::pow(qb, m - t.k - 1);
    for (int i = 0; i < frame.p; ++i) {
      const Expr& s = frame.sigma[i][t.b];
      if (s.is_const(0.0)) continue;
      g[static_cast<std::size_t>(i)] += s.eval(x) * term;
    }
  }
  return g;
}

}  // namespace esym
