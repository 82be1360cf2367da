#pragma once

// Stochastic linear regression model: y_i(k) = theta' phi_i(k) + v_i(k).
//
// Sensor indices are 0-based throughout the library; file formats and the
// CLI print them 1-based.

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dremnet/matrix.hpp"

namespace dremnet {

using SensorIndex = std::size_t;
using Step = std::int64_t;

/// The unknown parameter. Non-empty and finite.
class Parameter {
 public:
  explicit Parameter(Vector entries);

  std::size_t dimension() const { return entries_.size(); }
  const Vector& entries() const { return entries_; }
  double operator[](std::size_t l) const { return entries_[l]; }

 private:
  Vector entries_;
};

/// phi(k) = values[k mod values.size()].
struct PeriodicList {
  std::vector<Vector> values;
};

/// phi(k) equals `initial` except in `component`, which follows
/// x(k) = x(k-1) + cos(k * pi * numerator / denominator), x(0) = initial[component].
/// The increment is rational in pi so quadrant angles evaluate to exact 0/+-1.
struct RecursiveCosine {
  Vector initial;
  std::size_t component = 0;
  std::int64_t angle_numerator = 1;
  std::int64_t angle_denominator = 4;
};

struct ConstantRegressor {
  Vector value;
};

/// phi(k) = values[k] for k inside the table, values.back() afterwards.
struct CustomTable {
  std::vector<Vector> values;
};

class RegressorGenerator {
 public:
  using Spec = std::variant<PeriodicList, RecursiveCosine, ConstantRegressor, CustomTable>;

  explicit RegressorGenerator(Spec spec);

  std::size_t dimension() const { return dimension_; }
  std::string_view kind() const;
  const Spec& spec() const { return spec_; }

  /// phi(k). Linear in k for the recursive kind; use table() for sweeps.
  Vector at(Step k) const;

  /// phi(0) .. phi(last), computed incrementally.
  std::vector<Vector> table(Step last) const;

  /// Analytical bound on |phi(k)|_inf over all k >= 0 (+inf when unbounded).
  double bound() const;

 private:
  Spec spec_;
  std::size_t dimension_ = 0;
};

Vector regressor_at(const RegressorGenerator& gen, Step k);

/// cos(pi * numerator / denominator) with exact values on multiples of pi/2.
double cos_pi_rational(std::int64_t numerator, std::int64_t denominator);

/// Per-sensor Gaussian noise. Draws are a pure function of (seed, sensor, k),
/// so evaluation order and worker count never change a run.
class NoiseModel {
 public:
  NoiseModel(std::vector<double> variances, std::uint64_t seed);

  std::size_t sensors() const { return variances_.size(); }
  double variance(SensorIndex i) const { return variances_.at(i); }
  const std::vector<double>& variances() const { return variances_; }
  std::uint64_t seed() const { return seed_; }

  double sample(SensorIndex i, Step k) const;

 private:
  std::vector<double> variances_;
  std::uint64_t seed_;
};

double sample_noise(const NoiseModel& model, SensorIndex i, Step k);

/// Unit-variance normal draw keyed on (seed, stream, counter).
double keyed_standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

struct Measurement {
  double value = 0.0;
  SensorIndex sensor = 0;
  Step k = 0;
};

/// value = theta' phi + noise, evaluated exactly in that order.
Measurement measure(const Parameter& theta, std::span<const double> phi, double noise,
                    SensorIndex sensor = 0, Step k = 0);

}  // namespace dremnet
