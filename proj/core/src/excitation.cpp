#include "dremnet/excitation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dremnet/drem.hpp"

namespace dremnet {

namespace {

void check_window_args(std::size_t window, double omega, Step horizon, Step first,
                       std::size_t length) {
  if (window == 0) throw std::invalid_argument("excitation: window H must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("excitation: omega must be > 0");
  if (first < 0) throw std::invalid_argument("excitation: first window start must be >= 0");
  if (horizon - static_cast<Step>(window) < first)
    throw std::invalid_argument("excitation: horizon shorter than the window H");
  if (static_cast<std::size_t>(horizon) > length)
    throw std::invalid_argument("excitation: trace shorter than the horizon");
}

// Minimum over k in [first, horizon - window] of sum_{t=k}^{k+window-1} s[t].
double min_window_sum(std::span<const double> s, std::size_t window, Step horizon, Step first) {
  std::vector<double> prefix(static_cast<std::size_t>(horizon) + 1, 0.0);
  for (Step t = 0; t < horizon; ++t) prefix[t + 1] = prefix[t] + s[t];
  double best = std::numeric_limits<double>::infinity();
  for (Step k = first; k + static_cast<Step>(window) <= horizon; ++k)
    best = std::min(best, prefix[k + window] - prefix[k]);
  return best;
}

std::vector<double> neighborhood_energy(const DeltaTrace& traces, const GraphSchedule& g,
                                        SensorIndex i, Step horizon) {
  std::vector<double> s(static_cast<std::size_t>(horizon), 0.0);
  for (Step t = 0; t < horizon; ++t)
    for (SensorIndex j : closed_in_neighborhood(g, i, t)) {
      const double v = traces.per_sensor.at(j)[t];
      s[t] += v * v;
    }
  return s;
}

std::vector<double> own_energy(std::span<const double> trace, Step horizon) {
  std::vector<double> s(static_cast<std::size_t>(horizon));
  for (Step t = 0; t < horizon; ++t) s[t] = trace[t] * trace[t];
  return s;
}

std::optional<std::size_t> smallest_window(std::span<const double> energy, double omega,
                                           std::size_t max_window, Step horizon, Step first) {
  for (std::size_t h = 1; h <= max_window; ++h)
    if (min_window_sum(energy, h, horizon, first) >= omega) return h;
  return std::nullopt;
}

}  // namespace

DeltaTrace delta_traces(const std::vector<RegressorGenerator>& generators, std::size_t d,
                        Step last) {
  DeltaTrace out;
  for (const auto& gen : generators) {
    if (gen.dimension() != d) throw std::invalid_argument("delta_traces: generator dimension");
    const auto phis = gen.table(last);
    std::vector<double> trace(phis.size(), 0.0);
    std::vector<Vector> history(d);
    for (Step k = static_cast<Step>(d) - 1; k <= last; ++k) {
      for (std::size_t r = 0; r < d; ++r) history[r] = phis[k - r];
      trace[k] = determinant(stack_regressors(history));
    }
    out.per_sensor.push_back(std::move(trace));
  }
  return out;
}

bool PeCertificate::all_satisfied() const {
  return std::all_of(satisfied.begin(), satisfied.end(), [](bool b) { return b; });
}

PeCertificate local_pe_check(const DeltaTrace& traces, const GraphSchedule& g, std::size_t window,
                             double omega, Step horizon, Step first) {
  check_window_args(window, omega, horizon, first, traces.length());
  if (traces.sensors() != g.sensors())
    throw std::invalid_argument("local_pe_check: trace and graph sensor counts differ");
  PeCertificate cert{window, omega, first, horizon, {}, {}};
  for (SensorIndex i = 0; i < traces.sensors(); ++i) {
    const double m = min_window_sum(neighborhood_energy(traces, g, i, horizon), window, horizon, first);
    cert.margin.push_back(m);
    cert.satisfied.push_back(m >= omega);
  }
  return cert;
}

SinglePeResult single_sensor_pe(std::span<const double> trace, std::size_t window, double omega,
                                Step horizon, Step first) {
  check_window_args(window, omega, horizon, first, trace.size());
  const double m = min_window_sum(own_energy(trace, horizon), window, horizon, first);
  return {m >= omega, m};
}

std::vector<std::optional<std::size_t>> find_certificate(const DeltaTrace& traces,
                                                         const GraphSchedule& g, double omega,
                                                         std::size_t max_window, Step horizon,
                                                         Step first) {
  check_window_args(max_window, omega, horizon, first, traces.length());
  std::vector<std::optional<std::size_t>> out;
  for (SensorIndex i = 0; i < traces.sensors(); ++i)
    out.push_back(smallest_window(neighborhood_energy(traces, g, i, horizon), omega, max_window,
                                  horizon, first));
  return out;
}

std::vector<std::optional<std::size_t>> find_single_certificate(const DeltaTrace& traces,
                                                                double omega,
                                                                std::size_t max_window,
                                                                Step horizon, Step first) {
  check_window_args(max_window, omega, horizon, first, traces.length());
  std::vector<std::optional<std::size_t>> out;
  for (const auto& trace : traces.per_sensor)
    out.push_back(smallest_window(own_energy(trace, horizon), omega, max_window, horizon, first));
  return out;
}

}  // namespace dremnet
