#pragma once

// Full experiment description plus the JSON loader and builtin scenarios.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dremnet/estimator.hpp"
#include "dremnet/model.hpp"
#include "dremnet/topology.hpp"

namespace dremnet {

/// Malformed or constraint-violating scenario. The message names the field
/// (or line/column for syntax errors).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message includes the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  std::size_t n = 0;
  std::size_t d = 0;
  Parameter theta{Vector{0.0}};
  std::vector<RegressorGenerator> generators;
  std::vector<double> noise_variance;
  GraphSchedule graph = GraphSchedule::fixed(0, {});
  StepSchedule schedule;
  std::vector<double> mu;
  std::vector<Vector> theta_hat0;
  Step horizon = 500;
};

/// Constraint violations prefixed with the offending field; empty when valid.
std::vector<std::string> scenario_violations(const Scenario& s);
/// Throws ScenarioError listing every violation.
void validate_scenario(const Scenario& s);

/// The four-sensor ring reference: theta = [2.5, -1], mu_i = 0.1 i,
/// alpha(k) = 0.7/k, unit noise variance, zero initial estimates.
Scenario four_sensor_reference(double noise_variance = 1.0);

/// "sec5" (alias "ring4"), "sec5-noiseless", "constant-regressor".
std::vector<std::string> builtin_names();
bool is_builtin(std::string_view name);
Scenario builtin_scenario(std::string_view name);

Scenario parse_scenario(std::string_view json_text, std::string_view origin = "<string>");
/// Builtin name or path to a JSON file.
Scenario load_scenario(std::string_view source);

std::string scenario_to_json(const Scenario& s);

}  // namespace dremnet
