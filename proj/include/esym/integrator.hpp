#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace esym {

enum class Method { rk4_fixed, rk45_adaptive };
enum class Status { completed, left_region, step_underflow };

std::string method_name(Method m);
Method method_from_name(const std::string& s);
std::string status_name(Status s);
Status status_from_name(const std::string& s);

struct IntegratorConfig {
  Method method = Method::rk45_adaptive;
  double dt = 1e-2;  // fixed step, or initial step when adaptive
  double rtol = 1e-10;
  double atol = 1e-12;
  double dt_min = 1e-12;
  double dt_max = 0.1;
  double T = 10.0;
  int sample_stride = 1;

  void validate() const;
};

using StateFn = std::function<double(std::span<const double>)>;

struct Monitor {
  std::string name;
  StateFn f;
};

struct OdeSystem {
  int dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> field;
  std::function<bool(std::span<const double>)> region;  // empty: everywhere
  std::vector<Monitor> monitors;
  std::vector<std::string> state_names;
  std::vector<int> frozen;  // components with identically zero velocity
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, std::vector<double> state)
      : std::runtime_error(what), t(t), state(std::move(state)) {}
  double t;
  std::vector<double> state;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::string> state_names;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> monitors;  // per sample
  Status status = Status::completed;
  std::string message;
  long steps_accepted = 0;
  long steps_rejected = 0;
  double max_accepted_error = 0.0;  // embedded estimate in tolerance units
};

Trajectory integrate(const OdeSystem& sys, std::vector<double> x0, const IntegratorConfig& cfg);

struct ChannelDrift {
  double initial = 0.0;
  double max_abs = 0.0;
  double max_rel = 0.0;  // max_abs / max(1, |initial|)
};

struct InvariantReport {
  std::map<std::string, ChannelDrift> channels;
  Status status = Status::completed;
  std::size_t samples = 0;
  double final_time = 0.0;
};

InvariantReport invariant_report(const Trajectory& traj);
nlohmann::json report_to_json(const InvariantReport& r);

void write_csv(const Trajectory& traj, std::ostream& os);
nlohmann::json trajectory_to_json(const Trajectory& traj, const nlohmann::json& meta);
Trajectory trajectory_from_json(const nlohmann::json& j);

std::string format_g17(double v);

}  // namespace esym
