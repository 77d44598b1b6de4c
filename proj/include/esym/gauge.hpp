#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "esym/phasespace.hpp"

namespace esym {

struct LieAlgebra {
  std::string name;
  int d = 0;
  std::vector<double> c;  // c[(a*d + b)*d + k] = c_ab^k

  double at(int a, int b, int k) const {
    return c[static_cast<std::size_t>((a * d + b) * d + k)];
  }
  bool abelian() const;

  static LieAlgebra u1();
  static LieAlgebra so3();
  static LieAlgebra su2();
  // validates skew symmetry and the Jacobi identity
  static LieAlgebra custom(std::string name, int d, std::vector<double> c);
  static LieAlgebra by_name(const std::string& name);
};

struct GaugePhasePoint {
  std::vector<double> q, m, O;
  std::vector<double> flat() const;
};

struct GaugeData {
  LieAlgebra algebra;
  EFrame frame;
  std::vector<std::vector<Expr>> A;                    // p x d
  std::vector<std::vector<std::vector<Expr>>> F;       // p x p x d

  GaugeData() = default;
  GaugeData(LieAlgebra algebra, EFrame frame, std::vector<std::vector<Expr>> A);

  int p() const { return frame.p; }
  int n() const { return frame.n(); }
  int d() const { return algebra.d; }
  int state_size() const { return n() + p() + d(); }
};

enum class BivectorMutation { none, flip_momentum_charge };

std::vector<std::vector<std::vector<double>>> curvature(const GaugeData& gd, std::span<const double> q);
GaugePhasePoint minimal_coupling_map(const GaugeData& gd, const GaugePhasePoint& pt);
GaugePhasePoint minimal_coupling_inverse(const GaugeData& gd, const GaugePhasePoint& pt);

// (2p+d) x (2p+d) matrix in the (E, V, O) basis, evaluated at a point in
// coupled coordinates; f' = grad f^T Pi grad H
Eigen::MatrixXd coupled_poisson_bivector(const GaugeData& gd, std::span<const double> y,
                                         BivectorMutation mutation = BivectorMutation::none);

// canonical bracket tensor on (q, m, O): cotangent part plus Lie-Poisson on O
Eigen::MatrixXd uncoupled_poisson_bivector(const GaugeData& gd, std::span<const double> y);

// frame gradient (E_i f, d f/d m, d f/d O) of a function of the full state
std::vector<double> gauge_frame_gradient(const EFunction& f, const GaugeData& gd,
                                         std::span<const double> y);

// ambient velocity (qdot, mdot, Odot)
std::vector<double> wong_field(const EFunction& H, const GaugeData& gd, std::span<const double> y,
                               BivectorMutation mutation = BivectorMutation::none);

}  // namespace esym
