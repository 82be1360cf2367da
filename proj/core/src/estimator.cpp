#include "dremnet/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dremnet {

double step_size(const StepSchedule& s, Step k) {
  switch (s.kind) {
    case StepKind::kHarmonic:
      return std::min(1.0, s.c / static_cast<double>(std::max<Step>(k, 1)));
    case StepKind::kConstant:
      return s.c;
    case StepKind::kTable:
      if (s.values.empty()) throw std::invalid_argument("step_size: empty table");
      return s.values[std::min(static_cast<std::size_t>(std::max<Step>(k, 0)), s.values.size() - 1)];
  }
  return 0.0;
}

std::vector<std::string> check_step_schedule(const StepSchedule& s, Step horizon) {
  std::vector<std::string> problems;
  if (s.kind == StepKind::kTable && s.values.empty()) {
    problems.emplace_back("step_size.values: table is empty");
    return problems;
  }
  if (s.kind == StepKind::kHarmonic && !(s.c > 0.0)) {
    problems.emplace_back("step_size.c: harmonic coefficient must be > 0");
    return problems;
  }
  const Step last = s.kind == StepKind::kTable
                        ? std::max<Step>(horizon, static_cast<Step>(s.values.size()))
                        : horizon;
  double prev = step_size(s, 0);
  for (Step k = 0; k <= last; ++k) {
    const double a = step_size(s, k);
    if (!(a > 0.0 && a <= 1.0)) {
      problems.push_back("step_size: alpha(" + std::to_string(k) + ") = " + std::to_string(a) +
                         " outside (0, 1]");
      break;
    }
    if (a > prev) {
      problems.push_back("step_size: alpha increases at k = " + std::to_string(k));
      break;
    }
    prev = a;
  }
  // Constant schedules and finite tables hold a positive value forever.
  if (s.kind != StepKind::kHarmonic)
    problems.emplace_back("step_size: alpha(k) does not vanish as k -> infinity");
  return problems;
}

double GatedInbox::gated_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.delta * e.delta;
  return s;
}

GatedInbox gate(std::span<const DremMessage* const> inbox, std::size_t counter, std::size_t d) {
  GatedInbox out;
  out.open = counter >= d;
  out.entries.reserve(inbox.size());
  for (const DremMessage* m : inbox) out.entries.push_back({m, out.open ? m->delta_bar : 0.0});
  return out;
}

Vector update_estimate(const NodeState& state, const GatedInbox& gated, double alpha) {
  const double denom = state.mu + gated.gated_sum();
  Vector next = state.theta_hat;
  for (std::size_t l = 0; l < next.size(); ++l) {
    double residual = 0.0;
    for (const auto& e : gated.entries)
      residual += e.delta * (e.message->ybar[l] - e.delta * state.theta_hat[l]);
    next[l] += alpha * residual / denom;
  }
  return next;
}

std::size_t update_counter(std::size_t counter, double gated_sum, std::size_t d) {
  return (gated_sum != 0.0 && counter >= d) ? 0 : counter + 1;
}

NodeStepResult node_step(const NodeState& state, Step k, const DremMessage& own,
                         std::span<const DremMessage* const> received,
                         const StepSchedule& schedule) {
  const std::size_t d = state.theta_hat.size();
  if (own.ybar.size() != d) throw std::invalid_argument("node_step: message dimension mismatch");

  std::vector<const DremMessage*> inbox;
  inbox.reserve(received.size() + 1);
  inbox.push_back(&own);
  inbox.insert(inbox.end(), received.begin(), received.end());

  const GatedInbox gated = gate(inbox, state.counter, d);
  NodeStepResult r;
  r.alpha = step_size(schedule, k);
  r.gated_sum = gated.gated_sum();
  r.effective = r.gated_sum != 0.0;
  r.beta = r.alpha * r.gated_sum / (state.mu + r.gated_sum);
  r.state.mu = state.mu;
  r.state.theta_hat = r.effective ? update_estimate(state, gated, r.alpha) : state.theta_hat;
  r.state.counter = update_counter(state.counter, r.gated_sum, d);
  if (r.effective)
    for (const auto& e : gated.entries)
      if (e.delta != 0.0) r.sources.push_back(e.message->sensor);
  return r;
}

}  // namespace dremnet
