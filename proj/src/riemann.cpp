#include "esym/riemann.hpp"

#include <cmath>

namespace esym {

EMetric::EMetric(EFrame f, std::vector<std::vector<Expr>> gin, int neg)
    : frame(std::move(f)), negative_eigenvalues(neg) {
  const int p = frame.p;
  if (static_cast<int>(gin.size()) != p) throw std::invalid_argument("metric must be p x p");
  for (const auto& row : gin)
    if (static_cast<int>(row.size()) != p) throw std::invalid_argument("metric must be p x p");
  g.assign(p, std::vector<Expr>(p, Expr(0.0)));
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      g[i][j] = gin[i][j];
      g[j][i] = gin[i][j];
    }
}

Eigen::MatrixXd EMetric::matrix(std::span<const double> q) const {
  frame.chart.require(q);
  const int p = frame.p;
  Eigen::MatrixXd M(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) M(i, j) = g[i][j].eval(q);
  return M;
}

namespace {

Eigen::FullPivLU<Eigen::MatrixXd> checked_lu(const Eigen::MatrixXd& M) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-13);
  if (!M.allFinite() || !lu.isInvertible())
    throw DegenerateMetricError("metric matrix is singular at the sampled point");
  return lu;
}

}  // namespace

Eigen::VectorXd metric_sharp(const EMetric& gm, std::span<const double> q, std::span<const double> alpha) {
  const Eigen::Map<const Eigen::VectorXd> a(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  return checked_lu(gm.matrix(q)).solve(a);
}

Eigen::VectorXd metric_flat(const EMetric& gm, std::span<const double> q, std::span<const double> v) {
  const Eigen::Map<const Eigen::VectorXd> a(v.data(), static_cast<Eigen::Index>(v.size()));
  return gm.matrix(q) * a;
}

bool signature_matches(const EMetric& gm, std::span<const double> q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm.matrix(q));
  int neg = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0) ++neg;
  return neg == gm.negative_eigenvalues;
}

double kinetic_hamiltonian(const EMetric& gm, const PhasePoint& pt) {
  const Eigen::Map<const Eigen::VectorXd> m(pt.m.data(), static_cast<Eigen::Index>(pt.m.size()));
  return m.dot(metric_sharp(gm, pt.q, pt.m));
}

namespace {

struct KineticData {
  EMetric gm;
  std::vector<std::vector<std::vector<Expr>>> dg;  // dg[j][a][b] = d g_ab / d q_j

  Eigen::VectorXd sharp_m(std::span<const double> x) const {
    const int n = gm.frame.n(), p = gm.frame.p;
    Eigen::VectorXd m(p);
    for (int i = 0; i < p; ++i) m(i) = x[static_cast<std::size_t>(n + i)];
    return checked_lu(gm.matrix(x)).solve(m);
  }
};

}  // namespace

EFunction kinetic_efunction(const EMetric& gm) {
  auto data = std::make_shared<KineticData>();
  data->gm = gm;
  const int n = gm.frame.n(), p = gm.frame.p;
  data->dg.assign(n, std::vector<std::vector<Expr>>(p, std::vector<Expr>(p)));
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) data->dg[j][a][b] = gm.g[a][b].diff(j);

  std::vector<Expr> partials;
  for (int j = 0; j < n; ++j) {
    OpaqueFn d;
    d.name = "dK/dq" + std::to_string(j);
    d.f = [data, j](std::span<const double> x) {
      const Eigen::VectorXd v = data->sharp_m(x);
      const int p = data->gm.frame.p;
      double s = 0.0;
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
          const Expr& e = data->dg[j][a][b];
          if (e.is_const(0.0)) continue;
          s += v(a) * e.eval(x) * v(b);
        }
      return -s;
    };
    partials.push_back(Expr::opaque(std::move(d)));
  }
  for (int i = 0; i < p; ++i) {
    OpaqueFn d;
    d.name = "dK/dm" + std::to_string(i);
    d.f = [data, i](std::span<const double> x) { return 2.0 * data->sharp_m(x)(i); };
    partials.push_back(Expr::opaque(std::move(d)));
  }
  OpaqueFn k;
  k.name = "K";
  k.f = [data](std::span<const double> x) {
    const int n = data->gm.frame.n(), p = data->gm.frame.p;
    const Eigen::VectorXd v = data->sharp_m(x);
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += x[static_cast<std::size_t>(n + i)] * v(i);
    return s;
  };
  k.partials = std::move(partials);
  return EFunction(Expr::opaque(std::move(k)), n + p);
}

std::vector<double> geodesic_field(const EMetric& gm, const PhasePoint& pt) {
  const PhaseSpace ps = cotangent_bundle(gm.frame);
  return hamiltonian_field(kinetic_efunction(gm), ps, pt.flat());
}

}  // namespace esym
