#include "dremnet/check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dremnet {

namespace {

std::string format_omega(double omega) {
  std::ostringstream os;
  os << omega;
  return os.str();
}

}  // namespace

ScenarioReport audit_traces(const DeltaTrace& traces, const GraphSchedule& g, std::size_t d,
                            std::size_t max_window, double omega, Step horizon) {
  ScenarioReport rep;
  rep.horizon = horizon;
  rep.omega = omega;
  rep.first_window = static_cast<Step>(d) - 1;
  rep.max_window = std::min<std::size_t>(
      max_window, static_cast<std::size_t>(std::max<Step>(horizon - rep.first_window, 0)));
  rep.sensors.resize(traces.sensors());

  if (rep.max_window == 0) {
    rep.local_pe = false;
    rep.violations.emplace_back("horizon too short to certify any excitation window");
    return rep;
  }
  const auto local = find_certificate(traces, g, omega, rep.max_window, horizon, rep.first_window);
  const auto single = find_single_certificate(traces, omega, rep.max_window, horizon, rep.first_window);
  for (SensorIndex i = 0; i < traces.sensors(); ++i) {
    auto& se = rep.sensors[i];
    se.local_window = local[i];
    se.single_window = single[i];
    const std::size_t lw = local[i].value_or(rep.max_window);
    const std::size_t sw = single[i].value_or(rep.max_window);
    se.local_margin = local_pe_check(traces, g, lw, omega, horizon, rep.first_window).margin[i];
    se.single_margin =
        single_sensor_pe(traces.per_sensor[i], sw, omega, horizon, rep.first_window).margin;
    const std::string who = "sensor " + std::to_string(i + 1);
    if (!local[i]) {
      rep.local_pe = false;
      rep.violations.push_back(who + ": no Local-PE certificate with H <= " +
                               std::to_string(rep.max_window) + ", omega = " +
                               format_omega(omega));
    }
    if (!single[i])
      rep.notes.push_back(who + ": not persistently exciting on its own (H <= " +
                          std::to_string(rep.max_window) + ")");
  }
  return rep;
}

ScenarioReport check_scenario(const Scenario& s, std::size_t max_window, double omega,
                              Step horizon) {
  validate_scenario(s);
  ScenarioReport rep =
      audit_traces(delta_traces(s.generators, s.d, horizon), s.graph, s.d, max_window, omega, horizon);

  for (SensorIndex i = 0; i < s.n; ++i) {
    auto& se = rep.sensors[i];
    se.declared_bound = s.generators[i].bound();
    for (const auto& phi : s.generators[i].table(horizon))
      for (double x : phi) se.observed_bound = std::max(se.observed_bound, std::abs(x));
    if (!std::isfinite(se.declared_bound) || se.observed_bound > se.declared_bound) {
      rep.regressors_bounded = false;
      rep.violations.push_back("sensor " + std::to_string(i + 1) + ": regressor is not bounded");
    }
  }

  for (auto& p : check_step_schedule(s.schedule, horizon)) {
    rep.step_size_ok = false;
    rep.violations.push_back(std::move(p));
  }
  return rep;
}

}  // namespace dremnet
