#pragma once

// Synchronous-round simulation of the network and the Monte Carlo driver.
//
// Round k: every sensor measures y_i(k), forms its DREM message for k and
// sends it along the step-k out-edges; then every sensor runs node_step on
// the messages it received in the same round.

#include <cstdint>
#include <span>
#include <vector>

#include "dremnet/drem.hpp"
#include "dremnet/scenario.hpp"

namespace dremnet {

struct RunOptions {
  bool record_messages = false;
};

struct UpdateEvent {
  Step k = 0;
  SensorIndex sensor = 0;
  double alpha = 0.0;
  double gated_sum = 0.0;
  double beta = 0.0;
  std::vector<SensorIndex> sources;
};

struct RunResult {
  std::uint64_t seed = 0;
  Step horizon = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  Vector theta;

  std::vector<double> estimates;       // [(k * n + i) * d + l], k = 0..horizon
  std::vector<double> error_norms;     // [k * n + i]
  std::vector<std::size_t> counters;   // [k * n + i]
  std::vector<std::uint8_t> effective;  // [k * n + i], update performed during round k
  std::vector<UpdateEvent> updates;
  std::vector<DremMessage> messages;  // only with RunOptions::record_messages

  std::size_t payload_values = 0;  // real values delivered over edges
  std::size_t deliveries = 0;      // messages delivered over edges

  std::span<const double> estimate(Step k, SensorIndex i) const {
    return {estimates.data() + (static_cast<std::size_t>(k) * n + i) * d, d};
  }
  double error_norm(Step k, SensorIndex i) const {
    return error_norms[static_cast<std::size_t>(k) * n + i];
  }
  std::size_t counter(Step k, SensorIndex i) const {
    return counters[static_cast<std::size_t>(k) * n + i];
  }
};

/// Bit-identical for identical (scenario, seed).
RunResult run_single(const Scenario& s, std::uint64_t seed, const RunOptions& options = {});

struct MonteCarloAggregate {
  std::size_t runs = 0;
  std::uint64_t base_seed = 0;
  Step horizon = 0;
  std::size_t n = 0;
  std::size_t d = 0;

  std::vector<double> mean_error_norm;  // [k * n + i]
  std::vector<double> mean_error;       // [(k * n + i) * d + l], error = theta_hat - theta
  std::vector<double> var_error;        // sample variance (M - 1), 0 when M == 1

  double error_norm(Step k, SensorIndex i) const {
    return mean_error_norm[static_cast<std::size_t>(k) * n + i];
  }
  double mean(Step k, SensorIndex i, std::size_t l) const {
    return mean_error[(static_cast<std::size_t>(k) * n + i) * d + l];
  }
  double variance(Step k, SensorIndex i, std::size_t l) const {
    return var_error[(static_cast<std::size_t>(k) * n + i) * d + l];
  }
};

/// Runs seeds base_seed+1 .. base_seed+runs. The reduction is blocked in
/// run order, so the result does not depend on `workers`.
MonteCarloAggregate run_monte_carlo(const Scenario& s, std::size_t runs, std::uint64_t base_seed,
                                    std::size_t workers = 1);

}  // namespace dremnet
