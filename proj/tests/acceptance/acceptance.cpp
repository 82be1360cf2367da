// Acceptance checks. One PASS/FAIL line per criterion; every tolerance is a
// named constant below. Exit status is nonzero if any selected criterion fails.
//
//   acceptance [--criterion N] [--cli PATH] [--workdir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dremnet/analysis.hpp"
#include "dremnet/drem.hpp"
#include "dremnet/excitation.hpp"
#include "dremnet/scenario.hpp"
#include "dremnet/simulation.hpp"
#include "oracles.hpp"

using namespace dremnet;

namespace {

// C1
constexpr int kLemmaInstances = 1000;
constexpr double kLemmaRelTol = 1e-9;
constexpr double kLemmaSeconds = 5.0;
// C2
constexpr int kAdjInstances = 1000;
constexpr double kAdjTol = 1e-9;
constexpr double kAdjSeconds = 5.0;
// C3
constexpr double kNoiseFreeTol = 1e-3;
constexpr double kNoiseFreeSeconds = 1.0;
// C4
constexpr std::size_t kFigureRuns = 1000;
constexpr double kDecayRatio = 0.15;
constexpr Step kSmoothBlock = 50;
constexpr double kFigureSeconds = 60.0;
// C5, C6
constexpr std::size_t kMomentRuns = 10000;
constexpr double kMeanSe = 4.0;
constexpr double kVarRelTol = 0.10;
constexpr double kBoundSe = 4.0;
constexpr double kMomentSeconds = 600.0;
// C7
constexpr std::size_t kLocalMaxWindow = 8;
constexpr std::size_t kSingleMaxWindow = 50;
constexpr double kOmega = 1.0;
constexpr Step kPeHorizon = 200;
constexpr double kPeSeconds = 1.0;
// C8
constexpr Step kSingleUseHorizon = 2000;
constexpr double kSingleUseSeconds = 1.0;
// C9
constexpr double kDeterminismSeconds = 10.0;

const std::vector<Step> kCheckpoints{10, 100, 500};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Cofactor adjugate/determinant in plain doubles, d <= 3.
std::vector<std::vector<double>> oracle_adj(const std::vector<std::vector<double>>& m, double& det) {
  const std::size_t n = m.size();
  if (n == 1) {
    det = m[0][0];
    return {{1.0}};
  }
  if (n == 2) {
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return {{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}};
  }
  std::vector<std::vector<double>> adj(3, std::vector<double>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const std::size_t r0 = i == 0 ? 1 : 0, r1 = i == 2 ? 1 : 2;
      const std::size_t c0 = j == 0 ? 1 : 0, c1 = j == 2 ? 1 : 2;
      const double minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
      adj[j][i] = ((i + j) % 2 == 0) ? minor : -minor;
    }
  det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
  return adj;
}

Outcome lemma_identity() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::normal_distribution<double> z(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < kLemmaInstances; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
    Vector theta(d);
    for (auto& x : theta) x = u(rng);
    const Parameter p(theta);
    DremWindow w(d, 0);
    std::vector<std::vector<double>> rows;  // oldest first as pushed
    std::vector<double> noise;
    for (std::size_t s = 0; s < d; ++s) {
      Vector phi(d);
      for (auto& x : phi) x = u(rng);
      const double v = z(rng);
      w.push(static_cast<Step>(s), phi, measure(p, phi, v).value, v);
      rows.push_back(phi);
      noise.push_back(v);
    }
    std::reverse(rows.begin(), rows.end());
    std::reverse(noise.begin(), noise.end());
    double det = 0.0;
    const auto adj = oracle_adj(rows, det);
    const auto [msg, mixed] = w.transform();
    for (std::size_t l = 0; l < d; ++l) {
      double vbar = 0.0;
      for (std::size_t j = 0; j < d; ++j) vbar += adj[l][j] * noise[j];
      const double expect = det * theta[l] + vbar;
      const double scale = std::abs(det * theta[l]) + std::abs(vbar);
      const double err = std::abs(msg.ybar[l] - expect) / (scale > 0.0 ? scale : 1.0);
      worst = std::max(worst, err);
    }
  }
  return {worst <= kLemmaRelTol, "max relative error " + fmt(worst) + " (tol " + fmt(kLemmaRelTol) + ")"};
}

Matrix to_matrix(const oracle::IntMatrix& m) {
  Matrix out(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = static_cast<double>(m[i][j]);
  return out;
}

Outcome adjugate_oracle() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int t = 0; t < kAdjInstances; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
    const Matrix prod = adjugate(m) * m;
    const double det = determinant(m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(prod(i, j) - (i == j ? det : 0.0)) / (1.0 + std::abs(det)));
  }
  int mismatches = 0;
  for (int t = 0; t < kAdjInstances; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 4);
    const auto im = oracle::random_int_matrix(rng, n, -9, 9);
    const Matrix m = to_matrix(im);
    if (determinant(m) != static_cast<double>(oracle::int_det(im)) || adjugate(m) != to_matrix(oracle::int_adj(im)))
      ++mismatches;
  }
  return {worst <= kAdjTol && mismatches == 0,
          "max |adj(M)M - det(M)I| / (1+|det|) " + fmt(worst) + " (tol " + fmt(kAdjTol) +
              "), integer mismatches " + std::to_string(mismatches)};
}

Outcome noise_free_convergence() {
  const Scenario s = builtin_scenario("sec5-noiseless");
  const auto r = run_single(s, 1);
  bool ok = true;
  std::string norms;
  for (SensorIndex i = 0; i < s.n; ++i) {
    const double e = r.error_norm(s.horizon, i);
    ok = ok && e < kNoiseFreeTol;
    norms += (i ? ", " : "") + fmt(e);
  }
  return {ok, "final error norms [" + norms + "] at k=" + std::to_string(s.horizon) + " (tol " +
                  fmt(kNoiseFreeTol) + ")"};
}

Outcome figure_shape() {
  const Scenario s = builtin_scenario("sec5");
  const auto agg = run_monte_carlo(s, kFigureRuns, 0, workers());
  bool ok = true;
  std::string ratios, monotone;
  for (SensorIndex i = 0; i < s.n; ++i) {
    const double ratio = agg.error_norm(s.horizon, i) / agg.error_norm(10, i);
    ok = ok && ratio <= kDecayRatio;
    ratios += (i ? ", " : "") + fmt(ratio);
    double prev = INFINITY;
    bool mono = true;
    for (Step b = 0; b + kSmoothBlock <= s.horizon; b += kSmoothBlock) {
      double sum = 0.0;
      for (Step k = b; k < b + kSmoothBlock; ++k) sum += agg.error_norm(k, i);
      const double mean = sum / static_cast<double>(kSmoothBlock);
      mono = mono && mean <= prev;
      prev = mean;
    }
    ok = ok && mono;
    monotone += mono ? "y" : "n";
  }
  return {ok, "ratio e(500)/e(10) [" + ratios + "] (tol " + fmt(kDecayRatio) + "), block-mean non-increasing [" +
                  monotone + "]"};
}

struct MomentData {
  Scenario s = builtin_scenario("sec5");
  MonteCarloAggregate agg;
  MomentTrajectory oracle;
};

const MomentData& moments() {
  static const MomentData m = [] {
    MomentData d;
    d.agg = run_monte_carlo(d.s, kMomentRuns, 0, workers());
    d.oracle = moment_recursions(d.s, d.s.horizon);
    return d;
  }();
  return m;
}

Outcome mean_agreement() {
  const auto& m = moments();
  double worst = 0.0;
  for (Step k : kCheckpoints)
    for (SensorIndex i = 0; i < m.s.n; ++i)
      for (std::size_t l = 0; l < m.s.d; ++l) {
        const double se = std::sqrt(m.agg.variance(k, i, l) / static_cast<double>(kMomentRuns));
        const double diff = std::abs(m.agg.mean(k, i, l) - m.oracle.mean[m.oracle.at(k, i, l)]);
        worst = std::max(worst, se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY));
      }
  return {worst <= kMeanSe, "max |mc - oracle| / SE " + fmt(worst) + " (tol " + fmt(kMeanSe) + ")"};
}

Outcome covariance_agreement() {
  const auto& m = moments();
  double worst_rel = 0.0;
  for (Step k : kCheckpoints)
    for (SensorIndex i = 0; i < m.s.n; ++i)
      for (std::size_t l = 0; l < m.s.d; ++l) {
        const double exact = m.oracle.cov_exact[m.oracle.at(k, i, l)];
        const double mc = m.agg.variance(k, i, l);
        worst_rel = std::max(worst_rel, exact > 0.0 ? std::abs(mc - exact) / exact : (mc == 0.0 ? 0.0 : INFINITY));
      }
  const double se_factor = std::sqrt(2.0 / static_cast<double>(kMomentRuns - 1));
  double worst_excess = -INFINITY;
  for (Step k = 0; k <= m.s.horizon; ++k)
    for (SensorIndex i = 0; i < m.s.n; ++i)
      for (std::size_t l = 0; l < m.s.d; ++l) {
        const double mc = m.agg.variance(k, i, l);
        const double bound = m.oracle.cov_bound[m.oracle.at(k, i, l)];
        const double se = mc * se_factor;
        worst_excess = std::max(worst_excess, se > 0.0 ? (mc - bound) / se : (mc > bound ? INFINITY : -INFINITY));
      }
  const bool ok = worst_rel <= kVarRelTol && worst_excess <= kBoundSe;
  return {ok, "max |var - exact| / exact " + fmt(worst_rel) + " (tol " + fmt(kVarRelTol) +
                  "), max (var - bound) / SE " + fmt(worst_excess) + " (tol " + fmt(kBoundSe) + ")"};
}

Outcome local_pe_audit() {
  const Scenario s = builtin_scenario("sec5");
  const Step first = static_cast<Step>(s.d) - 1;
  const auto traces = delta_traces(s.generators, s.d, kPeHorizon);
  const auto local = find_certificate(traces, s.graph, kOmega, kLocalMaxWindow, kPeHorizon, first);
  bool local_ok = true;
  std::string windows;
  for (std::size_t i = 0; i < local.size(); ++i) {
    local_ok = local_ok && local[i].has_value();
    windows += (i ? ", " : "") + (local[i] ? std::to_string(*local[i]) : std::string("none"));
  }
  bool s4_fails = true;
  for (std::size_t h = 1; h <= kSingleMaxWindow; ++h)
    s4_fails = s4_fails && !single_sensor_pe(traces.per_sensor[3], h, kOmega, kPeHorizon, first).satisfied;
  const bool s1_ok = single_sensor_pe(traces.per_sensor[0], 1, kOmega, kPeHorizon, first).satisfied;
  return {local_ok && s4_fails && s1_ok,
          "local H [" + windows + "] (max " + std::to_string(kLocalMaxWindow) + "), sensor 4 single-PE fails for H<=" +
              std::to_string(kSingleMaxWindow) + ": " + (s4_fails ? "yes" : "no") +
              ", sensor 1 single-PE at H=1: " + (s1_ok ? "yes" : "no")};
}

Outcome single_use() {
  Scenario s = builtin_scenario("sec5");
  s.horizon = kSingleUseHorizon;
  const auto r = run_single(s, 1);
  std::map<SensorIndex, Step> last;
  std::map<SensorIndex, std::set<std::pair<SensorIndex, Step>>> used;
  std::size_t reuse = 0, close = 0;
  Step min_gap = kSingleUseHorizon;
  for (const auto& u : r.updates) {
    if (auto it = last.find(u.sensor); it != last.end()) {
      min_gap = std::min(min_gap, u.k - it->second);
      if (u.k - it->second < static_cast<Step>(s.d + 1)) ++close;
    }
    last[u.sensor] = u.k;
    for (SensorIndex j : u.sources)
      for (Step t = u.k - static_cast<Step>(s.d) + 1; t <= u.k; ++t)
        if (!used[u.sensor].insert({j, t}).second) ++reuse;
  }
  return {reuse == 0 && close == 0 && !r.updates.empty(),
          std::to_string(r.updates.size()) + " updates, reused pairs " + std::to_string(reuse) +
              ", min gap " + std::to_string(min_gap) + " (need >= " + std::to_string(s.d + 1) + ")"};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism(const std::string& cli, const std::string& workdir) {
  if (cli.empty()) return {false, "no --cli given"};
  std::string outputs[2];
  const char* counts[2] = {"1", "8"};
  for (int t = 0; t < 2; ++t) {
    const std::string out = (std::filesystem::path(workdir) / ("c9_workers" + std::string(counts[t]) + ".csv")).string();
    const std::string cmd = "\"" + cli + "\" mc --runs 100 --seed 42 --workers " + counts[t] + " --out \"" + out + "\"";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    outputs[t] = slurp(out);
  }
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
  return {same, std::to_string(outputs[0].size()) + " vs " + std::to_string(outputs[1].size()) + " bytes, " +
                    (same ? "identical" : "different")};
}

struct Criterion {
  int id;
  std::string name;
  double seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::string cli, workdir = std::filesystem::temp_directory_path().string();
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (a + 1 >= argc) {
      std::cerr << "missing value for " << arg << '\n';
      return 2;
    }
    if (arg == "--criterion") only = std::atoi(argv[++a]);
    else if (arg == "--cli") cli = argv[++a];
    else if (arg == "--workdir") workdir = argv[++a];
    else {
      std::cerr << "unknown argument " << arg << '\n';
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "DREM scalar regression identity", kLemmaSeconds, lemma_identity},
      {2, "adjugate/determinant oracle", kAdjSeconds, adjugate_oracle},
      {3, "noise-free convergence", kNoiseFreeSeconds, noise_free_convergence},
      {4, "Monte Carlo decay shape", kFigureSeconds, figure_shape},
      {5, "mean-moment oracle agreement", kMomentSeconds, mean_agreement},
      {6, "second-moment oracle agreement and bound", kMomentSeconds, covariance_agreement},
      {7, "Local-PE audit", kPeSeconds, local_pe_audit},
      {8, "single-use instrumentation", kSingleUseSeconds, single_use},
      {9, "worker-count determinism", kDeterminismSeconds, [&] { return determinism(cli, workdir); }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.seconds;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("%s C%d %s: %s; %.3f s (limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.seconds, in_time ? "" : ", exceeded");
  }
  return all ? 0 : 1;
}
