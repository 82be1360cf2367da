#include "dremnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dremnet {

namespace {

void require_finite(const Vector& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

std::size_t table_dimension(const std::vector<Vector>& values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string(what) + ": empty value list");
  const std::size_t d = values.front().size();
  for (const auto& v : values) {
    if (v.size() != d) throw std::invalid_argument(std::string(what) + ": inconsistent lengths");
    require_finite(v, what);
  }
  return d;
}

double max_abs_entry(const std::vector<Vector>& values) {
  double b = 0.0;
  for (const auto& v : values)
    for (double x : v) b = std::max(b, std::abs(x));
  return b;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Parameter::Parameter(Vector entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("Parameter: dimension must be >= 1");
  require_finite(entries_, "Parameter");
}

RegressorGenerator::RegressorGenerator(Spec spec) : spec_(std::move(spec)) {
  dimension_ = std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PeriodicList>) {
          return table_dimension(s.values, "periodic-list");
        } else if constexpr (std::is_same_v<T, RecursiveCosine>) {
          if (s.initial.empty()) throw std::invalid_argument("recursive-cosine: empty initial value");
          require_finite(s.initial, "recursive-cosine");
          if (s.component >= s.initial.size())
            throw std::invalid_argument("recursive-cosine: component out of range");
          if (s.angle_denominator <= 0)
            throw std::invalid_argument("recursive-cosine: angle denominator must be positive");
          return s.initial.size();
        } else if constexpr (std::is_same_v<T, ConstantRegressor>) {
          if (s.value.empty()) throw std::invalid_argument("constant: empty value");
          require_finite(s.value, "constant");
          return s.value.size();
        } else {
          return table_dimension(s.values, "custom-table");
        }
      },
      spec_);
}

std::string_view RegressorGenerator::kind() const {
  static constexpr std::string_view names[] = {"periodic-list", "recursive-cosine", "constant",
                                               "custom-table"};
  return names[spec_.index()];
}

Vector RegressorGenerator::at(Step k) const {
  if (k < 0) throw std::invalid_argument("RegressorGenerator::at: negative time step");
  return std::visit(
      [k](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PeriodicList>) {
          return s.values[static_cast<std::size_t>(k) % s.values.size()];
        } else if constexpr (std::is_same_v<T, RecursiveCosine>) {
          Vector v = s.initial;
          for (Step t = 1; t <= k; ++t)
            v[s.component] += cos_pi_rational(t * s.angle_numerator, s.angle_denominator);
          return v;
        } else if constexpr (std::is_same_v<T, ConstantRegressor>) {
          return s.value;
        } else {
          const auto idx = std::min(static_cast<std::size_t>(k), s.values.size() - 1);
          return s.values[idx];
        }
      },
      spec_);
}

std::vector<Vector> RegressorGenerator::table(Step last) const {
  std::vector<Vector> out;
  if (last < 0) return out;
  out.reserve(static_cast<std::size_t>(last) + 1);
  if (const auto* rc = std::get_if<RecursiveCosine>(&spec_)) {
    Vector v = rc->initial;
    out.push_back(v);
    for (Step t = 1; t <= last; ++t) {
      v[rc->component] += cos_pi_rational(t * rc->angle_numerator, rc->angle_denominator);
      out.push_back(v);
    }
    return out;
  }
  for (Step t = 0; t <= last; ++t) out.push_back(at(t));
  return out;
}

double RegressorGenerator::bound() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PeriodicList> || std::is_same_v<T, CustomTable>) {
          return max_abs_entry(s.values);
        } else if constexpr (std::is_same_v<T, RecursiveCosine>) {
          // |sum_{t=1..k} cos(t w)| <= 1/|sin(w/2)| unless w is a multiple of 2 pi.
          const double half_sin =
              std::abs(std::sin(std::numbers::pi * static_cast<double>(s.angle_numerator) /
                                (2.0 * static_cast<double>(s.angle_denominator))));
          if (s.angle_numerator % (2 * s.angle_denominator) == 0)
            return std::numeric_limits<double>::infinity();
          double b = std::abs(s.initial[s.component]) + 1.0 / half_sin;
          for (std::size_t j = 0; j < s.initial.size(); ++j)
            if (j != s.component) b = std::max(b, std::abs(s.initial[j]));
          return b;
        } else {
          return max_abs_entry({s.value});
        }
      },
      spec_);
}

Vector regressor_at(const RegressorGenerator& gen, Step k) { return gen.at(k); }

double cos_pi_rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0) throw std::invalid_argument("cos_pi_rational: denominator must be positive");
  const std::int64_t period = 2 * denominator;
  std::int64_t r = numerator % period;
  if (r < 0) r += period;
  if (r == 0) return 1.0;
  if (r == denominator) return -1.0;
  if (2 * r == denominator || 2 * r == 3 * denominator) return 0.0;
  return std::cos(std::numbers::pi * static_cast<double>(r) / static_cast<double>(denominator));
}

NoiseModel::NoiseModel(std::vector<double> variances, std::uint64_t seed)
    : variances_(std::move(variances)), seed_(seed) {
  for (double r : variances_)
    if (!(r >= 0.0) || !std::isfinite(r))
      throw std::invalid_argument("NoiseModel: variances must be finite and >= 0");
}

double NoiseModel::sample(SensorIndex i, Step k) const {
  const double r = variances_.at(i);
  if (r == 0.0) return 0.0;
  return std::sqrt(r) *
         keyed_standard_normal(seed_, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k));
}

double sample_noise(const NoiseModel& model, SensorIndex i, Step k) { return model.sample(i, k); }

double keyed_standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ stream);
  key = splitmix64(key ^ counter);
  const std::uint64_t a = splitmix64(key ^ 0xA5A5A5A5A5A5A5A5ULL);
  const std::uint64_t b = splitmix64(key ^ 0x3C3C3C3C3C3C3C3CULL);
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = static_cast<double>((a >> 11) + 1) * kScale;  // (0, 1]
  const double u2 = static_cast<double>(b >> 11) * kScale;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Measurement measure(const Parameter& theta, std::span<const double> phi, double noise,
                    SensorIndex sensor, Step k) {
  if (phi.size() != theta.dimension())
    throw std::invalid_argument("measure: regressor dimension does not match parameter");
  return {dot(theta.entries(), phi) + noise, sensor, k};
}

}  // namespace dremnet
