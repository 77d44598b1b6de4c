#pragma once
// Finite-difference references shared by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "esym/cli.hpp"

namespace oracle {

using Rng = std::mt19937_64;
using Fn = std::function<double(std::span<const double>)>;
using MatFn = std::function<Eigen::MatrixXd(std::span<const double>)>;

inline double uni(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }

inline double fd(const Fn& f, std::span<const double> x, std::size_t i, double h = 1e-5) {
  std::vector<double> a(x.begin(), x.end()), b(x.begin(), x.end());
  const double s = h * std::max(1.0, std::abs(x[i]));
  a[i] += s;
  b[i] -= s;
  return (f(a) - f(b)) / (2 * s);
}

inline Eigen::VectorXd fd_grad(const Fn& f, std::span<const double> x) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) g(static_cast<Eigen::Index>(i)) = fd(f, x, i);
  return g;
}

// interior point: every coordinate at distance >= lo from 0
inline std::vector<double> interior_point(const esym::EFrame& f, Rng& r, double lo = 0.1, double hi = 1.0) {
  for (;;) {
    std::vector<double> q(static_cast<std::size_t>(f.n()));
    for (auto& v : q) v = (uni(r, 0, 1) < 0.5 ? -1 : 1) * uni(r, lo, hi);
    if (f.chart.contains(q)) return q;
  }
}

inline esym::Expr smooth_function(int nvars, Rng& r) {
  using esym::Expr;
  Expr lin(uni(r, -1, 1)), quad(0.0);
  for (int i = 0; i < nvars; ++i) {
    lin = lin + Expr(uni(r, -1, 1)) * Expr::var(i);
    quad = quad + Expr(0.5 * uni(r, -1, 1)) * Expr::var(i) * Expr::var(i);
  }
  return esym::cos(lin) + quad;
}

inline Fn as_fn(const esym::Expr& e) {
  return [e](std::span<const double> x) { return e.eval(x); };
}

using GradFn = std::function<Eigen::VectorXd(std::span<const double>)>;

struct Scalar {
  Fn f;
  GradFn grad;  // ambient gradient
};

inline Scalar analytic(const esym::Expr& e, int nvars) {
  std::vector<esym::Expr> d;
  for (int i = 0; i < nvars; ++i) d.push_back(e.diff(i));
  return {as_fn(e), [d](std::span<const double> x) {
            Eigen::VectorXd g(static_cast<Eigen::Index>(d.size()));
            for (std::size_t i = 0; i < d.size(); ++i) g(static_cast<Eigen::Index>(i)) = d[i].eval(x);
            return g;
          }};
}

inline Scalar numeric(const Fn& f) {
  return {f, [f](std::span<const double> x) { return fd_grad(f, x); }};
}

// {f, g}(x) = (R df)^T Pi (R dg)
struct Bracket {
  MatFn Pi, R;
  Scalar operator()(const Scalar& f, const Scalar& g) const {
    return numeric([f, g, Pi = Pi, R = R](std::span<const double> x) {
      const Eigen::MatrixXd Rx = R(x);
      return (Rx * f.grad(x)).dot(Pi(x) * (Rx * g.grad(x)));
    });
  }
  double jacobi(const Scalar& f, const Scalar& g, const Scalar& h, std::span<const double> x) const {
    const auto& b = *this;
    return std::abs(b(f, b(g, h)).f(x) + b(g, b(h, f)).f(x) + b(h, b(f, g)).f(x));
  }
};

inline MatFn gauge_rows(const esym::GaugeData& gd) {
  return [gd](std::span<const double> y) {
    const int n = gd.n(), P = gd.p(), D = gd.d();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * P + D, n + P + D);
    for (int i = 0; i < P; ++i)
      for (int k = 0; k < n; ++k) R(i, k) = gd.frame.anchor[i][k].eval(y);
    R.block(P, n, P + D, P + D).setIdentity();
    return R;
  };
}

// ambient components of [E_i, E_j] minus sum_k C_ij^k E_k, derivatives by differences
inline double bracket_defect(const esym::EFrame& f, std::span<const double> q, int i, int j) {
  const int n = f.n();
  double worst = 0.0;
  for (int c = 0; c < n; ++c) {
    double v = 0.0;
    for (int a = 0; a < n; ++a) {
      v += f.anchor[i][a].eval(q) * fd(as_fn(f.anchor[j][c]), q, static_cast<std::size_t>(a));
      v -= f.anchor[j][a].eval(q) * fd(as_fn(f.anchor[i][c]), q, static_cast<std::size_t>(a));
    }
    for (int k = 0; k < f.p; ++k) v -= f.C[i][j][k].eval(q) * f.anchor[k][c].eval(q);
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

// sum_cyc ( C_ij^l C_lk^m - E_k(C_ij^m) ), E_k through the anchor with differences
inline double jacobi_defect(const esym::EFrame& f, std::span<const double> q, int i, int j, int k) {
  const int P = f.p, n = f.n();
  auto Ek = [&](int kk, const esym::Expr& e) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += f.anchor[kk][a].eval(q) * fd(as_fn(e), q, static_cast<std::size_t>(a));
    return s;
  };
  double worst = 0.0;
  for (int m = 0; m < P; ++m) {
    double v = 0.0;
    const int idx[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
    for (const auto& t : idx) {
      for (int l = 0; l < P; ++l) v += f.C[t[0]][t[1]][l].eval(q) * f.C[l][t[2]][m].eval(q);
      v -= Ek(t[2], f.C[t[0]][t[1]][m]);
    }
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace oracle
