#pragma once

// Audit of a scenario against the convergence assumptions: bounded
// regressors, Local-PE in every closed in-neighborhood, and a vanishing,
// non-summable step size in (0, 1].

#include <optional>
#include <string>
#include <vector>

#include "dremnet/excitation.hpp"
#include "dremnet/scenario.hpp"

namespace dremnet {

struct SensorExcitation {
  double observed_bound = 0.0;  // max |phi_i(k)|_inf over the horizon
  double declared_bound = 0.0;  // generator's analytical bound
  std::optional<std::size_t> local_window;
  double local_margin = 0.0;  // at local_window, or at the largest window tried
  std::optional<std::size_t> single_window;
  double single_margin = 0.0;
};

struct ScenarioReport {
  Step horizon = 0;
  double omega = 0.0;
  std::size_t max_window = 0;
  Step first_window = 0;
  std::vector<SensorExcitation> sensors;

  bool regressors_bounded = true;
  bool local_pe = true;
  bool step_size_ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> notes;  // informational, e.g. sensors that are not PE alone

  bool ok() const { return regressors_bounded && local_pe && step_size_ok; }
};

/// Local-PE and single-sensor PE certificate search over given traces.
/// Fills the excitation fields of the report (bounds are left at zero).
ScenarioReport audit_traces(const DeltaTrace& traces, const GraphSchedule& g, std::size_t d,
                            std::size_t max_window, double omega, Step horizon);

/// Windows start at k = d-1, the first step with a complete DREM stack.
ScenarioReport check_scenario(const Scenario& s, std::size_t max_window, double omega, Step horizon);

}  // namespace dremnet
