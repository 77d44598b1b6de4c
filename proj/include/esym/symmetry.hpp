#pragma once

#include <span>
#include <string>
#include <vector>

#include "esym/phasespace.hpp"

namespace esym {

struct ActionGenerator {
  std::vector<Expr> fundamental;  // frame components on the state space
  std::string label;
};

double moment_residual(const ActionGenerator& gen, const EFunction& mu, const PhaseSpace& ps,
                       std::span<const double> x);
double level_tangency(const ActionGenerator& gen, const EFunction& mu, const PhaseSpace& ps,
                      std::span<const double> x);

}  // namespace esym
