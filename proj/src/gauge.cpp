#include "esym/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace esym {

namespace {

double levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

}  // namespace

bool LieAlgebra::abelian() const {
  for (double v : c)
    if (v != 0.0) return false;
  return true;
}

LieAlgebra LieAlgebra::u1() { return {"u1", 1, {0.0}}; }

LieAlgebra LieAlgebra::so3() {
  LieAlgebra g{"so3", 3, std::vector<double>(27, 0.0)};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) g.c[static_cast<std::size_t>((a * 3 + b) * 3 + k)] = levi_civita(a, b, k);
  return g;
}

LieAlgebra LieAlgebra::su2() {
  // basis -i sigma_a / 2 has the same constants as so(3)
  LieAlgebra g = so3();
  g.name = "su2";
  return g;
}

LieAlgebra LieAlgebra::custom(std::string name, int d, std::vector<double> c) {
  if (d < 1) throw std::invalid_argument("Lie algebra dimension must be positive");
  if (static_cast<int>(c.size()) != d * d * d)
    throw std::invalid_argument("Lie algebra needs d^3 structure constants");
  LieAlgebra g{std::move(name), d, std::move(c)};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        if (std::abs(g.at(a, b, k) + g.at(b, a, k)) > 1e-12)
          throw std::invalid_argument("Lie algebra constants are not skew-symmetric");
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int e = 0; e < d; ++e)
        for (int k = 0; k < d; ++k) {
          double s = 0.0;
          for (int l = 0; l < d; ++l)
            s += g.at(a, b, l) * g.at(l, e, k) + g.at(b, e, l) * g.at(l, a, k) +
                 g.at(e, a, l) * g.at(l, b, k);
          if (std::abs(s) > 1e-10) throw std::invalid_argument("Lie algebra constants violate the Jacobi identity");
        }
  return g;
}

LieAlgebra LieAlgebra::by_name(const std::string& name) {
  if (name == "u1") return u1();
  if (name == "so3") return so3();
  if (name == "su2") return su2();
  throw std::invalid_argument("unknown Lie algebra '" + name + "'");
}

std::vector<double> GaugePhasePoint::flat() const {
  std::vector<double> y = q;
  y.insert(y.end(), m.begin(), m.end());
  y.insert(y.end(), O.begin(), O.end());
  return y;
}

GaugeData::GaugeData(LieAlgebra alg, EFrame fr, std::vector<std::vector<Expr>> a)
    : algebra(std::move(alg)), frame(std::move(fr)), A(std::move(a)) {
  const int P = frame.p, D = algebra.d;
  if (static_cast<int>(A.size()) != P) throw std::invalid_argument("connection must have p rows");
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != D) throw std::invalid_argument("connection rows must have d entries");
  F.assign(P, std::vector<std::vector<Expr>>(P, std::vector<Expr>(D, Expr(0.0))));
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j)
      for (int c = 0; c < D; ++c) {
        Expr f = frame.apply(i, A[j][c]) - frame.apply(j, A[i][c]);
        for (int k = 0; k < P; ++k)
          if (!frame.C[i][j][k].is_const(0.0)) f = f - frame.C[i][j][k] * A[k][c];
        for (int a = 0; a < D; ++a)
          for (int b = 0; b < D; ++b) {
            const double cab = algebra.at(a, b, c);
            if (cab != 0.0) f = f + Expr(cab) * A[i][a] * A[j][b];
          }
        F[i][j][c] = f;
      }
}

std::vector<std::vector<std::vector<double>>> curvature(const GaugeData& gd, std::span<const double> q) {
  gd.frame.chart.require(q);
  const int P = gd.p(), D = gd.d();
  std::vector<std::vector<std::vector<double>>> out(
      P, std::vector<std::vector<double>>(P, std::vector<double>(D, 0.0)));
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j)
      for (int c = 0; c < D; ++c) out[i][j][c] = gd.F[i][j][c].eval(q);
  return out;
}

namespace {

Eigen::MatrixXd connection_at(const GaugeData& gd, std::span<const double> q) {
  Eigen::MatrixXd A(gd.p(), gd.d());
  for (int i = 0; i < gd.p(); ++i)
    for (int a = 0; a < gd.d(); ++a) A(i, a) = gd.A[i][a].eval(q);
  return A;
}

GaugePhasePoint shift(const GaugeData& gd, const GaugePhasePoint& pt, double s) {
  gd.frame.chart.require(pt.q);
  GaugePhasePoint out = pt;
  const Eigen::MatrixXd A = connection_at(gd, pt.q);
  for (int i = 0; i < gd.p(); ++i)
    for (int a = 0; a < gd.d(); ++a)
      out.m[static_cast<std::size_t>(i)] += s * A(i, a) * pt.O[static_cast<std::size_t>(a)];
  return out;
}

Eigen::MatrixXd lie_poisson(const GaugeData& gd, std::span<const double> O) {
  const int D = gd.d();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(D, D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c) L(a, b) -= gd.algebra.at(a, b, c) * O[static_cast<std::size_t>(c)];
  return L;
}

Eigen::MatrixXd b_block(const GaugeData& gd, std::span<const double> q, const Eigen::VectorXd& m) {
  const int P = gd.p();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(P, P);
  for (int j = 0; j < P; ++j)
    for (int k = 0; k < P; ++k)
      for (int l = 0; l < P; ++l) {
        const Expr& c = gd.frame.C[j][k][l];
        if (!c.is_const(0.0)) B(j, k) += m(l) * c.eval(q);
      }
  return B;
}

}  // namespace

GaugePhasePoint minimal_coupling_map(const GaugeData& gd, const GaugePhasePoint& pt) {
  return shift(gd, pt, 1.0);
}

GaugePhasePoint minimal_coupling_inverse(const GaugeData& gd, const GaugePhasePoint& pt) {
  return shift(gd, pt, -1.0);
}

Eigen::MatrixXd uncoupled_poisson_bivector(const GaugeData& gd, std::span<const double> y) {
  gd.frame.chart.require(y);
  const int n = gd.n(), P = gd.p(), D = gd.d();
  Eigen::VectorXd m(P);
  for (int i = 0; i < P; ++i) m(i) = y[static_cast<std::size_t>(n + i)];
  Eigen::MatrixXd Pi = Eigen::MatrixXd::Zero(2 * P + D, 2 * P + D);
  Pi.block(0, P, P, P) = Eigen::MatrixXd::Identity(P, P);
  Pi.block(P, 0, P, P) = -Eigen::MatrixXd::Identity(P, P);
  Pi.block(P, P, P, P) = -b_block(gd, y, m);
  Pi.block(2 * P, 2 * P, D, D) = lie_poisson(gd, y.subspan(static_cast<std::size_t>(n + P), static_cast<std::size_t>(D)));
  return Pi;
}

Eigen::MatrixXd coupled_poisson_bivector(const GaugeData& gd, std::span<const double> y,
                                         BivectorMutation mutation) {
  gd.frame.chart.require(y);
  const int n = gd.n(), P = gd.p(), D = gd.d();
  const auto O = y.subspan(static_cast<std::size_t>(n + P), static_cast<std::size_t>(D));
  const Eigen::MatrixXd A = connection_at(gd, y);
  Eigen::VectorXd Ov(D);
  for (int a = 0; a < D; ++a) Ov(a) = O[static_cast<std::size_t>(a)];
  Eigen::VectorXd m(P);
  for (int i = 0; i < P; ++i) m(i) = y[static_cast<std::size_t>(n + i)];
  Eigen::MatrixXd FO = Eigen::MatrixXd::Zero(P, P);
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j)
      for (int c = 0; c < D; ++c) {
        const Expr& f = gd.F[i][j][c];
        if (!f.is_const(0.0)) FO(i, j) += Ov(c) * f.eval(y);
      }
  const Eigen::MatrixXd L = lie_poisson(gd, O);
  Eigen::MatrixXd AL = A * L;
  if (mutation == BivectorMutation::flip_momentum_charge) AL = -AL;

  Eigen::MatrixXd Pi = Eigen::MatrixXd::Zero(2 * P + D, 2 * P + D);
  Pi.block(0, P, P, P) = Eigen::MatrixXd::Identity(P, P);
  Pi.block(P, 0, P, P) = -Eigen::MatrixXd::Identity(P, P);
  Pi.block(P, P, P, P) = -b_block(gd, y, m) - FO;
  Pi.block(P, 2 * P, P, D) = AL;
  Pi.block(2 * P, P, D, P) = -AL.transpose();
  Pi.block(2 * P, 2 * P, D, D) = L;
  return Pi;
}

std::vector<double> gauge_frame_gradient(const EFunction& f, const GaugeData& gd,
                                         std::span<const double> y) {
  const int n = gd.n(), P = gd.p(), D = gd.d();
  if (f.nvars != n + P && f.nvars != n + P + D)
    throw std::invalid_argument("function variable count does not match the gauge phase space");
  // base derivatives of the (q, m) part through the prolonged frame
  const EFrame& fr = gd.frame;
  fr.chart.require(y);
  check_admissible(f, fr);
  std::vector<double> g(static_cast<std::size_t>(2 * P + D), 0.0);
  for (int i = 0; i < P; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const Expr& r = fr.anchor[i][j];
      if (r.is_const(0.0) || f.dsmooth[j].is_const(0.0)) continue;
      s += r.eval(y) * f.dsmooth[j].eval(y);
    }
    g[static_cast<std::size_t>(i)] = s;
  }
  if (f.singular()) {
    EFunction base_only(Expr(0.0), n, f.logs, f.powers);
    const auto gs = e_function_frame_gradient(base_only, fr, y);
    for (int i = 0; i < P; ++i) g[static_cast<std::size_t>(i)] += gs[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < P; ++i) g[static_cast<std::size_t>(P + i)] = f.dsmooth[static_cast<std::size_t>(n + i)].eval(y);
  if (f.nvars == n + P + D)
    for (int a = 0; a < D; ++a)
      g[static_cast<std::size_t>(2 * P + a)] = f.dsmooth[static_cast<std::size_t>(n + P + a)].eval(y);
  return g;
}

std::vector<double> wong_field(const EFunction& H, const GaugeData& gd, std::span<const double> y,
                               BivectorMutation mutation) {
  const int n = gd.n(), P = gd.p(), D = gd.d();
  const auto g = gauge_frame_gradient(H, gd, y);
  const Eigen::Map<const Eigen::VectorXd> grad(g.data(), static_cast<Eigen::Index>(g.size()));
  const Eigen::VectorXd X = coupled_poisson_bivector(gd, y, mutation) * grad;
  std::vector<double> v(static_cast<std::size_t>(n + P + D), 0.0);
  for (int i = 0; i < P; ++i)
    for (int k = 0; k < n; ++k) {
      const Expr& r = gd.frame.anchor[i][k];
      if (!r.is_const(0.0)) v[static_cast<std::size_t>(k)] += r.eval(y) * X(i);
    }
  for (int i = 0; i < P; ++i) v[static_cast<std::size_t>(n + i)] = X(P + i);
  if (!gd.algebra.abelian())
    for (int a = 0; a < D; ++a) v[static_cast<std::size_t>(n + P + a)] = X(2 * P + a);
  return v;
}

}  // namespace esym
