#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

#include "esym/ecalculus.hpp"

namespace esym {

struct PhasePoint {
  std::vector<double> q;
  std::vector<double> m;

  std::vector<double> flat() const;
};

// Either the E-cotangent bundle of a base frame (state [q, m]) or a base frame
// carrying a given E-symplectic 2-form (state q).
struct PhaseSpace {
  enum class Kind { cotangent, symplectic };
  Kind kind = Kind::cotangent;
  EFrame base;
  EFrame frame;  // frame on the state space
  EForm omega;
  std::vector<std::string> names;

  int dim() const { return frame.p; }
  int state_size() const { return frame.n(); }
  Eigen::MatrixXd omega_matrix(std::span<const double> x) const;
  Eigen::MatrixXd poisson_matrix(std::span<const double> x) const;  // omega^{-1}
};

EFrame cotangent_frame(const EFrame& base, const std::vector<std::string>& momentum_names = {});
EForm liouville_form(const EFrame& base);
EForm canonical_form(const EFrame& base);

PhaseSpace cotangent_bundle(const EFrame& base, const std::vector<std::string>& momentum_names = {});
PhaseSpace symplectic_manifold(const EFrame& frame, const EForm& omega);

std::vector<double> liouville_components(const EFrame& base, const PhasePoint& pt);
Eigen::MatrixXd canonical_symplectic(const EFrame& base, const PhasePoint& pt);

// frame gradient of H on the state space
std::vector<double> frame_gradient(const EFunction& H, const PhaseSpace& ps,
                                   std::span<const double> x);

// solves iota_X omega = -dH; frame components
std::vector<double> hamiltonian_field(const EFunction& H, const PhaseSpace& ps,
                                      std::span<const double> x);
double hamiltonian_residual(const EFunction& H, const PhaseSpace& ps, std::span<const double> x,
                            std::span<const double> X);

// omega(X_f, X_g)
double poisson_bracket(const EFunction& f, const EFunction& g, const PhaseSpace& ps,
                       std::span<const double> x);

std::vector<double> pushforward_velocity(const PhaseSpace& ps, std::span<const double> x,
                                         std::span<const double> X);

}  // namespace esym
