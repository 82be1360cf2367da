#include "dremnet/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "dremnet/estimator.hpp"

namespace dremnet {

namespace {

// Noise-independent data shared by every run of a scenario.
struct Plan {
  const Scenario& s;
  std::vector<std::optional<ExtendedRegressor>> ext;  // [k * n + i], empty during warm-up
  std::vector<Vector> phi;                            // [k * n + i]
  NeighborhoodCache neighbors;

  explicit Plan(const Scenario& sc)
      : s(sc), neighbors(sc.graph, std::max<Step>(sc.horizon - 1, 0)) {
    validate_scenario(sc);
    const auto steps = static_cast<std::size_t>(std::max<Step>(sc.horizon, 0));
    std::vector<std::vector<Vector>> tables;
    for (const auto& g : sc.generators) tables.push_back(g.table(sc.horizon));
    phi.resize(steps * sc.n);
    ext.resize(steps * sc.n);
    std::vector<Vector> history(sc.d);
    for (std::size_t k = 0; k < steps; ++k)
      for (SensorIndex i = 0; i < sc.n; ++i) {
        phi[k * sc.n + i] = tables[i][k];
        if (k + 1 < sc.d) continue;
        for (std::size_t r = 0; r < sc.d; ++r) history[r] = tables[i][k - r];
        ext[k * sc.n + i] = extend(stack_regressors(history));
      }
  }
};

template <typename Sink>
void simulate(const Plan& plan, std::uint64_t seed, Sink& sink) {
  const Scenario& s = plan.s;
  const std::size_t n = s.n, d = s.d;
  const NoiseModel noise(s.noise_variance, seed);

  std::vector<NodeState> nodes(n);
  for (SensorIndex i = 0; i < n; ++i) nodes[i] = {s.theta_hat0[i], 0, s.mu[i]};

  std::vector<double> y(static_cast<std::size_t>(std::max<Step>(s.horizon, 0)) * n);
  std::vector<DremMessage> board(n);
  std::vector<const DremMessage*> received;
  Vector y_stack(d);

  for (Step k = 0;; ++k) {
    for (SensorIndex i = 0; i < n; ++i) sink.record_state(k, i, nodes[i]);
    if (k >= s.horizon) break;
    const auto kk = static_cast<std::size_t>(k);

    for (SensorIndex i = 0; i < n; ++i) {
      const Vector& phi = plan.phi[kk * n + i];
      y[kk * n + i] = measure(s.theta, phi, noise.sample(i, k), i, k).value;
      const auto& ext = plan.ext[kk * n + i];
      if (!ext) {
        board[i] = warmup_message(d, i, k);
      } else {
        for (std::size_t r = 0; r < d; ++r) y_stack[r] = y[(kk - r) * n + i];
        board[i] = mix(*ext, y_stack, i, k);
      }
      if constexpr (Sink::kWantsMessages) sink.record_message(board[i]);
    }

    std::vector<NodeState> next(n);
    std::size_t step_payload = 0, step_deliveries = 0;
    for (SensorIndex i = 0; i < n; ++i) {
      received.clear();
      for (SensorIndex j : plan.neighbors.in(i, k)) {
        received.push_back(&board[j]);
        step_payload += board[j].payload_size();
        ++step_deliveries;
      }
      NodeStepResult r = node_step(nodes[i], k, board[i], received, s.schedule);
      next[i] = r.state;
      if (r.effective) sink.record_update(k, i, std::move(r));
    }
    if (step_payload != (d + 1) * step_deliveries)
      throw std::logic_error("message budget violated: expected d+1 values per out-edge");
    sink.record_delivery(step_payload, step_deliveries);
    nodes = std::move(next);
  }
}

struct ResultSink {
  RunResult& r;
  bool messages;
  static constexpr bool kWantsMessages = true;

  void record_state(Step k, SensorIndex i, const NodeState& st) {
    const std::size_t at = static_cast<std::size_t>(k) * r.n + i;
    double sq = 0.0;
    for (std::size_t l = 0; l < r.d; ++l) {
      r.estimates[at * r.d + l] = st.theta_hat[l];
      const double e = st.theta_hat[l] - r.theta[l];
      sq += e * e;
    }
    r.error_norms[at] = std::sqrt(sq);
    r.counters[at] = st.counter;
  }
  void record_update(Step k, SensorIndex i, NodeStepResult&& res) {
    r.effective[static_cast<std::size_t>(k) * r.n + i] = 1;
    r.updates.push_back({k, i, res.alpha, res.gated_sum, res.beta, std::move(res.sources)});
  }
  void record_message(const DremMessage& m) {
    if (messages) r.messages.push_back(m);
  }
  void record_delivery(std::size_t payload, std::size_t count) {
    r.payload_values += payload;
    r.deliveries += count;
  }
};

// Running sums over a contiguous block of runs.
struct BlockSums {
  std::vector<double> norm, err, err_sq;

  explicit BlockSums(std::size_t cells, std::size_t d)
      : norm(cells, 0.0), err(cells * d, 0.0), err_sq(cells * d, 0.0) {}
};

struct AccumulateSink {
  BlockSums& sums;
  const Vector& theta;
  std::size_t n, d;
  static constexpr bool kWantsMessages = false;

  void record_state(Step k, SensorIndex i, const NodeState& st) {
    const std::size_t at = static_cast<std::size_t>(k) * n + i;
    double sq = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      const double e = st.theta_hat[l] - theta[l];
      sums.err[at * d + l] += e;
      sums.err_sq[at * d + l] += e * e;
      sq += e * e;
    }
    sums.norm[at] += std::sqrt(sq);
  }
  void record_update(Step, SensorIndex, NodeStepResult&&) {}
  void record_message(const DremMessage&) {}
  void record_delivery(std::size_t, std::size_t) {}
};

constexpr std::size_t kRunsPerBlock = 32;

}  // namespace

RunResult run_single(const Scenario& s, std::uint64_t seed, const RunOptions& options) {
  const Plan plan(s);
  RunResult r;
  r.seed = seed;
  r.horizon = s.horizon;
  r.n = s.n;
  r.d = s.d;
  r.theta = s.theta.entries();
  const std::size_t cells = (static_cast<std::size_t>(s.horizon) + 1) * s.n;
  r.estimates.resize(cells * s.d);
  r.error_norms.resize(cells);
  r.counters.resize(cells);
  r.effective.assign(cells, 0);
  ResultSink sink{r, options.record_messages};
  simulate(plan, seed, sink);
  return r;
}

MonteCarloAggregate run_monte_carlo(const Scenario& s, std::size_t runs, std::uint64_t base_seed,
                                    std::size_t workers) {
  if (runs == 0) throw std::invalid_argument("run_monte_carlo: need at least one run");
  const Plan plan(s);
  const std::size_t cells = (static_cast<std::size_t>(s.horizon) + 1) * s.n;
  const std::size_t blocks = (runs + kRunsPerBlock - 1) / kRunsPerBlock;
  std::vector<std::optional<BlockSums>> partial(blocks);
  const Vector& theta = s.theta.entries();

  std::atomic<std::size_t> next_block{0};
  auto work = [&] {
    for (std::size_t b; (b = next_block.fetch_add(1)) < blocks;) {
      BlockSums sums(cells, s.d);
      AccumulateSink sink{sums, theta, s.n, s.d};
      const std::size_t end = std::min(runs, (b + 1) * kRunsPerBlock);
      for (std::size_t r = b * kRunsPerBlock; r < end; ++r) simulate(plan, base_seed + r + 1, sink);
      partial[b] = std::move(sums);
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, blocks);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  BlockSums total(cells, s.d);
  for (const auto& p : partial)
    for (std::size_t c = 0; c < cells; ++c) {
      total.norm[c] += p->norm[c];
      for (std::size_t l = 0; l < s.d; ++l) {
        total.err[c * s.d + l] += p->err[c * s.d + l];
        total.err_sq[c * s.d + l] += p->err_sq[c * s.d + l];
      }
    }

  MonteCarloAggregate agg;
  agg.runs = runs;
  agg.base_seed = base_seed;
  agg.horizon = s.horizon;
  agg.n = s.n;
  agg.d = s.d;
  const auto m = static_cast<double>(runs);
  agg.mean_error_norm.resize(cells);
  agg.mean_error.resize(cells * s.d);
  agg.var_error.resize(cells * s.d);
  for (std::size_t c = 0; c < cells; ++c) agg.mean_error_norm[c] = total.norm[c] / m;
  for (std::size_t c = 0; c < cells * s.d; ++c) {
    const double mean = total.err[c] / m;
    agg.mean_error[c] = mean;
    agg.var_error[c] =
        runs > 1 ? std::max(0.0, (total.err_sq[c] - m * mean * mean) / (m - 1.0)) : 0.0;
  }
  return agg;
}

}  // namespace dremnet
