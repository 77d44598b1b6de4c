#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "esym/phasespace.hpp"

namespace esym {

class DegenerateMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EMetric {
  EFrame frame;
  std::vector<std::vector<Expr>> g;  // p x p, symmetric by construction
  int negative_eigenvalues = 0;      // declared signature

  EMetric() = default;
  // only the upper triangle of g is read
  EMetric(EFrame frame, std::vector<std::vector<Expr>> g, int negative_eigenvalues = 0);

  Eigen::MatrixXd matrix(std::span<const double> q) const;
};

Eigen::VectorXd metric_sharp(const EMetric& gm, std::span<const double> q, std::span<const double> alpha);
Eigen::VectorXd metric_flat(const EMetric& gm, std::span<const double> q, std::span<const double> v);
bool signature_matches(const EMetric& gm, std::span<const double> q);

// m^T g(q)^{-1} m, no factor one half
double kinetic_hamiltonian(const EMetric& gm, const PhasePoint& pt);

// the same function as an E-function on the cotangent state [q, m]
EFunction kinetic_efunction(const EMetric& gm);

std::vector<double> geodesic_field(const EMetric& gm, const PhasePoint& pt);

}  // namespace esym
