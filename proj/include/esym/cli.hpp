#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "esym/scenarios.hpp"

namespace esym {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scenario;          // built-in name, or empty when custom
  std::string custom_yaml;       // custom block as YAML text
  ScenarioParams params;
  std::vector<double> initial;   // empty: scenario default
  IntegratorConfig integrator;
  bool integrator_given = false;
  std::string out_dir = "out";
  std::string format = "both";
  std::vector<std::string> plot;  // "a:b" pairs
  std::uint64_t seed = 0;
  int ensemble = 1;
  double spread = 0.0;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
ScenarioSpec build_problem(const RunConfig& cfg);

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
std::string config_to_yaml(const RunConfig& cfg);

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitIncomplete = 2 };

int cmd_list(bool json, std::ostream& out);

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> plot;
  bool svg = true;
};

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool boolean = false;  // value is 0/1, threshold unused
};

std::vector<CheckResult> run_verify(const std::string& scope, BivectorMutation mutation);
int cmd_verify(const std::string& scope, const std::string& mutate, bool json, std::ostream& out,
               std::ostream& err);

struct ExportOptions {
  std::string scenario;   // template mode
  std::string input;      // conversion mode: trajectory JSON
  std::string out;        // file (template) or directory (conversion)
  std::string format = "csv";
  std::vector<std::string> plot;
};

int cmd_export(const ExportOptions& opt, std::ostream& out, std::ostream& err);

void init_logging();

}  // namespace esym
