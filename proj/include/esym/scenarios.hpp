#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esym/gauge.hpp"
#include "esym/integrator.hpp"
#include "esym/riemann.hpp"
#include "esym/symmetry.hpp"

namespace esym {

struct ScenarioParams {
  std::map<std::string, double> num;
  std::map<std::string, std::string> str;

  double get(const std::string& k, double fallback) const;
  std::string get(const std::string& k, const std::string& fallback) const;
};

struct ScenarioSpec {
  std::string name;
  std::string provenance;
  PhaseSpace phase;
  std::optional<EMetric> metric;
  std::optional<GaugeData> gauge;
  EFunction hamiltonian;
  std::vector<double> x0;
  std::vector<std::string> state_names;
  ScenarioParams params;
  std::optional<ActionGenerator> action;
  std::optional<EFunction> moment;
  IntegratorConfig integrator;
  std::vector<Monitor> extra_monitors;

  int state_size() const { return static_cast<int>(state_names.size()); }
  const EFrame& base_frame() const { return gauge ? gauge->frame : phase.base; }
  std::vector<double> velocity(std::span<const double> x,
                               BivectorMutation mutation = BivectorMutation::none) const;
  OdeSystem system(BivectorMutation mutation = BivectorMutation::none) const;
  bool in_region(std::span<const double> x) const;
};

std::vector<std::string> scenario_names();
ScenarioSpec make_scenario(const std::string& name, const ScenarioParams& params = {});

ScenarioSpec scenario_radko_sphere(const ScenarioParams& params = {});
ScenarioSpec scenario_radko_sphere_geodesic(const ScenarioParams& params = {});
ScenarioSpec scenario_lorentz_plane(const ScenarioParams& params = {});
ScenarioSpec scenario_mcgehee_3bp(const ScenarioParams& params = {});
ScenarioSpec scenario_penrose_blackhole(const ScenarioParams& params = {});
ScenarioSpec scenario_minkowski_foliation(const ScenarioParams& params = {});
ScenarioSpec scenario_wong_u1_plane(const ScenarioParams& params = {});
ScenarioSpec scenario_wong_so3_b(const ScenarioParams& params = {});

// Penrose chart helpers, a = pi/2 - arctan(v)
Expr penrose_h(double M);
EMetric penrose_metric(double M);

struct CalogeroForms {
  double trace;    // tr(X^2)
  double reduced;  // sum x_ii^2 + sum_{i != j} mu_ij mu_ji / (a_i - a_j)^2
};

CalogeroForms calogero_reduced_hamiltonian(const std::vector<double>& a, const Eigen::MatrixXcd& X);

}  // namespace esym
