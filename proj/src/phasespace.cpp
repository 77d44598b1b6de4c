#include "esym/phasespace.hpp"

#include <cmath>

namespace esym {

std::vector<double> PhasePoint::flat() const {
  std::vector<double> x = q;
  x.insert(x.end(), m.begin(), m.end());
  return x;
}

EFrame cotangent_frame(const EFrame& base, const std::vector<std::string>& momentum_names) {
  const int n = base.n(), p = base.p;
  std::vector<std::string> names = base.chart.coords;
  for (int i = 0; i < p; ++i) {
    if (!momentum_names.empty()) names.push_back(momentum_names.at(static_cast<std::size_t>(i)));
    else names.push_back("m" + std::to_string(i + 1));
  }
  Chart chart = Chart::make("T*" + base.chart.name, names, base.chart.boundary, base.chart.region,
                            base.chart.region_text);
  std::vector<std::vector<Expr>> anchor(2 * p, std::vector<Expr>(n + p, Expr(0.0)));
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < n; ++j) anchor[i][j] = base.anchor[i][j];
    anchor[p + i][n + i] = Expr(1.0);
  }
  std::vector<std::vector<std::vector<Expr>>> C(
      2 * p, std::vector<std::vector<Expr>>(2 * p, std::vector<Expr>(2 * p, Expr(0.0))));
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      for (int k = 0; k < p; ++k) C[i][j][k] = base.C[i][j][k];
  EFrame f = make_custom_frame(chart, anchor, C, base.order);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < n; ++j) f.sigma[i][j] = base.sigma[i][j];
  f.family = base.family;
  f.family_param = base.family_param;
  return f;
}

EForm liouville_form(const EFrame& base) {
  EForm w;
  w.degree = 1;
  for (int i = 0; i < base.p; ++i) w.coeffs[{i}] = Expr::var(base.n() + i);
  return w;
}

EForm canonical_form(const EFrame& base) {
  const int n = base.n(), p = base.p;
  EForm w;
  w.degree = 2;
  for (int i = 0; i < p; ++i) w.coeffs[{i, p + i}] = Expr(-1.0);
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) {
      Expr c(0.0);
      for (int l = 0; l < p; ++l) c = c + Expr::var(n + l) * base.C[j][k][l];
      if (!c.is_const(0.0)) w.coeffs[{j, k}] = -c;
    }
  return w;
}

PhaseSpace cotangent_bundle(const EFrame& base, const std::vector<std::string>& momentum_names) {
  PhaseSpace ps;
  ps.kind = PhaseSpace::Kind::cotangent;
  ps.base = base;
  ps.frame = cotangent_frame(base, momentum_names);
  ps.omega = canonical_form(base);
  ps.names = ps.frame.chart.coords;
  return ps;
}

PhaseSpace symplectic_manifold(const EFrame& frame, const EForm& omega) {
  if (omega.degree != 2) throw std::invalid_argument("symplectic form must have degree 2");
  PhaseSpace ps;
  ps.kind = PhaseSpace::Kind::symplectic;
  ps.base = frame;
  ps.frame = frame;
  ps.omega = omega;
  ps.names = frame.chart.coords;
  return ps;
}

namespace {

Eigen::MatrixXd b_matrix(const EFrame& base, std::span<const double> x) {
  const int n = base.n(), p = base.p;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < p; ++k)
      for (int l = 0; l < p; ++l) {
        const Expr& c = base.C[j][k][l];
        if (c.is_const(0.0)) continue;
        B(j, k) += x[static_cast<std::size_t>(n + l)] * c.eval(x);
      }
  return B;
}

}  // namespace

Eigen::MatrixXd PhaseSpace::omega_matrix(std::span<const double> x) const {
  frame.chart.require(x);
  const int d = dim();
  if (kind == Kind::cotangent) {
    const int p = base.p;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(d, d);
    W.topLeftCorner(p, p) = -b_matrix(base, x);
    W.topRightCorner(p, p) = -Eigen::MatrixXd::Identity(p, p);
    W.bottomLeftCorner(p, p) = Eigen::MatrixXd::Identity(p, p);
    return W;
  }
  Eigen::MatrixXd W(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) W(a, b) = omega.at({a, b}).eval(x);
  return W;
}

Eigen::MatrixXd PhaseSpace::poisson_matrix(std::span<const double> x) const {
  if (kind == Kind::cotangent) {
    frame.chart.require(x);
    const int p = base.p;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * p, 2 * p);
    P.topRightCorner(p, p) = Eigen::MatrixXd::Identity(p, p);
    P.bottomLeftCorner(p, p) = -Eigen::MatrixXd::Identity(p, p);
    P.bottomRightCorner(p, p) = -b_matrix(base, x);
    return P;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(omega_matrix(x));
  if (!lu.isInvertible()) throw std::runtime_error("symplectic form is degenerate at the sampled point");
  return lu.inverse();
}

Eigen::MatrixXd canonical_symplectic(const EFrame& base, const PhasePoint& pt) {
  PhaseSpace ps = cotangent_bundle(base);
  return ps.omega_matrix(pt.flat());
}

std::vector<double> liouville_components(const EFrame& base, const PhasePoint& pt) {
  const std::vector<double> x = pt.flat();
  base.chart.require(x);
  std::vector<double> out(pt.m.begin(), pt.m.end());
  out.resize(2 * pt.m.size(), 0.0);
  return out;
}

std::vector<double> frame_gradient(const EFunction& H, const PhaseSpace& ps,
                                   std::span<const double> x) {
  if (H.nvars != ps.state_size())
    throw std::invalid_argument("Hamiltonian variable count does not match the phase space");
  return e_function_frame_gradient(H, ps.frame, x);
}

std::vector<double> hamiltonian_field(const EFunction& H, const PhaseSpace& ps,
                                      std::span<const double> x) {
  const auto g = frame_gradient(H, ps, x);
  const Eigen::Map<const Eigen::VectorXd> grad(g.data(), static_cast<Eigen::Index>(g.size()));
  const Eigen::VectorXd X = ps.poisson_matrix(x) * grad;
  return {X.data(), X.data() + X.size()};
}

double hamiltonian_residual(const EFunction& H, const PhaseSpace& ps, std::span<const double> x,
                            std::span<const double> X) {
  const auto g = frame_gradient(H, ps, x);
  const Eigen::Map<const Eigen::VectorXd> grad(g.data(), static_cast<Eigen::Index>(g.size()));
  const Eigen::Map<const Eigen::VectorXd> v(X.data(), static_cast<Eigen::Index>(X.size()));
  return (ps.omega_matrix(x).transpose() * v + grad).norm();
}

double poisson_bracket(const EFunction& f, const EFunction& g, const PhaseSpace& ps,
                       std::span<const double> x) {
  const auto xf = hamiltonian_field(f, ps, x);
  const auto xg = hamiltonian_field(g, ps, x);
  const Eigen::Map<const Eigen::VectorXd> a(xf.data(), static_cast<Eigen::Index>(xf.size()));
  const Eigen::Map<const Eigen::VectorXd> b(xg.data(), static_cast<Eigen::Index>(xg.size()));
  return a.dot(ps.omega_matrix(x) * b);
}

std::vector<double> pushforward_velocity(const PhaseSpace& ps, std::span<const double> x,
                                         std::span<const double> X) {
  const EFrame& f = ps.frame;
  f.chart.require(x);
  std::vector<double> v(static_cast<std::size_t>(f.n()), 0.0);
  for (int a = 0; a < f.p; ++a) {
    const double xa = X[static_cast<std::size_t>(a)];
    for (int k = 0; k < f.n(); ++k) {
      const Expr& r = f.anchor[a][k];
      if (r.is_const(0.0)) continue;
      v[static_cast<std::size_t>(k)] += r.eval(x) * xa;
    }
  }
  return v;
}

}  // namespace esym
