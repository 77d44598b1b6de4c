#include "esym/symmetry.hpp"

#include <cmath>
#include <stdexcept>

namespace esym {

namespace {

Eigen::VectorXd generator_at(const ActionGenerator& gen, const PhaseSpace& ps,
                             std::span<const double> x) {
  if (static_cast<int>(gen.fundamental.size()) != ps.dim())
    throw std::invalid_argument("action generator " + gen.label + " has the wrong number of components");
  Eigen::VectorXd X(ps.dim());
  for (int a = 0; a < ps.dim(); ++a) X(a) = gen.fundamental[static_cast<std::size_t>(a)].eval(x);
  return X;
}

}  // namespace

double moment_residual(const ActionGenerator& gen, const EFunction& mu, const PhaseSpace& ps,
                       std::span<const double> x) {
  const Eigen::VectorXd X = generator_at(gen, ps, x);
  const auto g = frame_gradient(mu, ps, x);
  const Eigen::Map<const Eigen::VectorXd> grad(g.data(), static_cast<Eigen::Index>(g.size()));
  return (ps.omega_matrix(x).transpose() * X + grad).norm();
}

double level_tangency(const ActionGenerator& gen, const EFunction& mu, const PhaseSpace& ps,
                      std::span<const double> x) {
  const Eigen::VectorXd X = generator_at(gen, ps, x);
  const auto g = frame_gradient(mu, ps, x);
  const Eigen::Map<const Eigen::VectorXd> grad(g.data(), static_cast<Eigen::Index>(g.size()));
  return std::abs(grad.dot(X));
}

}  // namespace esym
