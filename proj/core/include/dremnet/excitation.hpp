#pragma once

// Excitation audits over scalar-regressor traces delta_bar_i(k).
//
// Local-PE for sensor i with window H and level omega:
//   sum_{t=k}^{k+H-1} sum_{j in J_i(t)} delta_bar_j(t)^2 >= omega   for every k,
// where J_i(t) is the closed in-neighborhood at t. Traces are finite, so every
// verdict here is certified on windows k in [first, horizon - H] only.

#include <optional>
#include <span>
#include <vector>

#include "dremnet/model.hpp"
#include "dremnet/topology.hpp"

namespace dremnet {

struct DeltaTrace {
  std::vector<std::vector<double>> per_sensor;  // [i][k], k = 0..K

  std::size_t sensors() const { return per_sensor.size(); }
  std::size_t length() const { return per_sensor.empty() ? 0 : per_sensor.front().size(); }
};

/// det(Phi_i(k)) for k = 0..last; zero during warm-up (k < d-1).
DeltaTrace delta_traces(const std::vector<RegressorGenerator>& generators, std::size_t d, Step last);

struct PeCertificate {
  std::size_t window = 1;
  double omega = 0.0;
  Step first = 0;
  Step horizon = 0;
  std::vector<bool> satisfied;
  std::vector<double> margin;  // min window sum per sensor

  bool all_satisfied() const;
};

struct SinglePeResult {
  bool satisfied = false;
  double margin = 0.0;
};

PeCertificate local_pe_check(const DeltaTrace& traces, const GraphSchedule& g, std::size_t window,
                             double omega, Step horizon, Step first = 0);

SinglePeResult single_sensor_pe(std::span<const double> trace, std::size_t window, double omega,
                                Step horizon, Step first = 0);

/// Smallest H <= max_window per sensor whose margin reaches omega.
std::vector<std::optional<std::size_t>> find_certificate(const DeltaTrace& traces,
                                                         const GraphSchedule& g, double omega,
                                                         std::size_t max_window, Step horizon,
                                                         Step first = 0);

/// Same search with singleton neighborhoods.
std::vector<std::optional<std::size_t>> find_single_certificate(const DeltaTrace& traces,
                                                                double omega,
                                                                std::size_t max_window,
                                                                Step horizon, Step first = 0);

}  // namespace dremnet
