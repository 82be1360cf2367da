#pragma once

// Stochastic dynamic regressor extension and mixing.
//
// Each sensor stacks its last d regressors into Phi(k) (newest row first) and
// premultiplies the matching measurement stack by adj(Phi(k)). Channel l of
// the result is the scalar regression ybar_l = det(Phi) * theta_l + vbar_l.

#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "dremnet/matrix.hpp"
#include "dremnet/model.hpp"

namespace dremnet {

struct ExtendedRegressor {
  Matrix phi;
  Matrix adj;
  double det = 0.0;
};

ExtendedRegressor extend(Matrix phi);

/// The d+1 values a sensor transmits per step.
struct DremMessage {
  SensorIndex sensor = 0;
  Step k = 0;
  double delta_bar = 0.0;
  Vector ybar;

  std::size_t payload_size() const { return ybar.size() + 1; }
};

/// adj(Phi) applied to the noise stack. Only available to instrumented runs.
struct MixedNoise {
  Vector vbar;
};

/// Rows are history[0] (newest) .. history[d-1] (oldest).
Matrix stack_regressors(std::span<const Vector> history);

DremMessage mix(const ExtendedRegressor& ext, std::span<const double> y_stack,
                SensorIndex sensor = 0, Step k = 0);
MixedNoise mix_noise(const ExtendedRegressor& ext, std::span<const double> v_stack);

/// delta_bar = 0, ybar = 0: what a sensor sends before it has d samples.
DremMessage warmup_message(std::size_t d, SensorIndex sensor, Step k);

/// Streaming history of one sensor's last d (phi, y, v) samples.
class DremWindow {
 public:
  DremWindow(std::size_t dimension, SensorIndex sensor);

  /// Samples must arrive at consecutive time steps.
  void push(Step k, Vector phi, double y, double noise = 0.0);

  bool ready() const { return samples_.size() == dimension_; }
  std::size_t dimension() const { return dimension_; }
  Step latest() const { return latest_; }

  ExtendedRegressor extended() const;
  std::pair<DremMessage, MixedNoise> transform() const;

 private:
  struct Sample {
    Vector phi;
    double y;
    double v;
  };
  std::size_t dimension_;
  SensorIndex sensor_;
  Step latest_ = -1;
  std::deque<Sample> samples_;  // newest at front
};

/// Message for transmission and the analysis-only mixed noise. Returns the
/// warm-up message (and zero noise) while the window is incomplete.
std::pair<DremMessage, MixedNoise> drem_transform(const DremWindow& window);

}  // namespace dremnet
