#pragma once

// Counter-gated distributed LMS estimator, one instance per sensor.
//
// Per step k a sensor i
//   1. gates every message in its closed in-neighborhood: delta_j = delta_bar_j
//      if c_i >= d, else 0;
//   2. updates each channel l independently:
//        th_l += alpha(k) * sum_j delta_j (ybar_jl - delta_j th_l) / (mu_i + sum_j delta_j^2);
//   3. resets c_i to 0 after an effective update (sum_j delta_j^2 != 0),
//      otherwise increments it.
// Consecutive effective updates are therefore at least d+1 steps apart and
// no measurement enters two updates of the same receiver.

#include <span>
#include <string>
#include <vector>

#include "dremnet/drem.hpp"
#include "dremnet/topology.hpp"

namespace dremnet {

enum class StepKind { kHarmonic, kConstant, kTable };

struct StepSchedule {
  StepKind kind = StepKind::kHarmonic;
  double c = 0.7;              // harmonic: min(1, c / max(k, 1)); constant: c
  std::vector<double> values;  // table: values[k], last value held afterwards

  static StepSchedule harmonic(double c) { return {StepKind::kHarmonic, c, {}}; }
  static StepSchedule constant(double value) { return {StepKind::kConstant, value, {}}; }
  static StepSchedule table(std::vector<double> values) {
    return {StepKind::kTable, 0.0, std::move(values)};
  }
};

double step_size(const StepSchedule& s, Step k);

/// Step-size requirements for convergence: 0 < alpha <= 1, non-increasing,
/// vanishing, non-summable. Checked on [0, horizon] plus the analytic tail.
std::vector<std::string> check_step_schedule(const StepSchedule& s, Step horizon);

struct NodeState {
  Vector theta_hat;
  std::size_t counter = 0;
  double mu = 1.0;
};

struct GatedMessage {
  const DremMessage* message = nullptr;
  double delta = 0.0;
};

struct GatedInbox {
  std::vector<GatedMessage> entries;
  bool open = false;

  double gated_sum() const;
};

/// `inbox` is the whole closed in-neighborhood, own message included.
GatedInbox gate(std::span<const DremMessage* const> inbox, std::size_t counter, std::size_t d);

Vector update_estimate(const NodeState& state, const GatedInbox& gated, double alpha);

std::size_t update_counter(std::size_t counter, double gated_sum, std::size_t d);

struct NodeStepResult {
  NodeState state;
  bool effective = false;
  double alpha = 0.0;
  double gated_sum = 0.0;
  double beta = 0.0;  // alpha * S / (mu + S), the mean contraction of this step
  /// Senders whose measurements entered this update (delta_j != 0).
  std::vector<SensorIndex> sources;
};

/// One round for one sensor. `received` holds the step-k messages of its
/// in-neighbors; the caller delivers them synchronously.
NodeStepResult node_step(const NodeState& state, Step k, const DremMessage& own,
                         std::span<const DremMessage* const> received,
                         const StepSchedule& schedule);

}  // namespace dremnet
