// dremnet: command-line front end for the distributed estimation simulator.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "dremnet/analysis.hpp"
#include "dremnet/check.hpp"
#include "dremnet/csv.hpp"
#include "dremnet/scenario.hpp"
#include "dremnet/simulation.hpp"

namespace {

constexpr int kValidationFailure = 1;
constexpr int kIoFailure = 2;

struct CommonOptions {
  std::string scenario = "sec5";
  std::uint64_t seed = 1;
  std::size_t runs = 1000;
  std::optional<dremnet::Step> steps;
  std::string out;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_runs) {
  cmd->add_option("--scenario", o.scenario, "Scenario JSON path or builtin name")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed (base seed for Monte Carlo runs)")->capture_default_str();
  cmd->add_option("--steps", o.steps, "Override the scenario horizon");
  cmd->add_option("--out", o.out, "Output CSV path (default: stdout)");
  if (with_runs) {
    cmd->add_option("--runs", o.runs, "Number of Monte Carlo runs")->capture_default_str();
    cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  }
}

dremnet::Scenario load(const CommonOptions& o) {
  dremnet::Scenario s = dremnet::load_scenario(o.scenario);
  if (o.steps) s.horizon = *o.steps;
  dremnet::validate_scenario(s);
  return s;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    std::cout.flush();
    if (!std::cout) throw dremnet::IoError("error writing to stdout");
    return;
  }
  dremnet::export_csv(path, writer);
}

int cmd_run(const CommonOptions& o, const std::string& trace, const std::string& messages) {
  const auto s = load(o);
  dremnet::RunOptions opts;
  opts.record_messages = !messages.empty();
  const auto r = dremnet::run_single(s, o.seed, opts);
  emit(o.out, [&](std::ostream& os) { dremnet::write_run_csv(os, r); });
  if (!trace.empty()) emit(trace, [&](std::ostream& os) { dremnet::write_trace_csv(os, r); });
  if (!messages.empty())
    emit(messages, [&](std::ostream& os) { dremnet::write_message_csv(os, r.messages, s.d); });
  return 0;
}

int cmd_mc(const CommonOptions& o) {
  const auto s = load(o);
  const auto agg = dremnet::run_monte_carlo(s, o.runs, o.seed, o.workers);
  emit(o.out, [&](std::ostream& os) { dremnet::write_aggregate_csv(os, agg); });
  return 0;
}

int cmd_check_pe(const CommonOptions& o, double omega, std::size_t max_window,
                 const std::string& traces_path) {
  const auto s = load(o);
  dremnet::ScenarioReport rep;
  if (traces_path.empty()) {
    rep = dremnet::check_scenario(s, max_window, omega, s.horizon);
  } else {
    const auto traces =
        dremnet::traces_from_message_csv(dremnet::read_csv_file(traces_path), s.n);
    const auto horizon = std::min<dremnet::Step>(s.horizon, static_cast<dremnet::Step>(traces.length()));
    rep = dremnet::audit_traces(traces, s.graph, s.d, max_window, omega, horizon);
  }
  emit(o.out, [&](std::ostream& os) { dremnet::write_pe_csv(os, rep); });
  for (const auto& v : rep.violations) std::cerr << "violation: " << v << '\n';
  for (const auto& n : rep.notes) std::cerr << "note: " << n << '\n';
  return rep.violations.empty() ? 0 : kValidationFailure;
}

int cmd_oracle(const CommonOptions& o) {
  const auto s = load(o);
  const auto m = dremnet::moment_recursions(s, s.horizon);
  emit(o.out, [&](std::ostream& os) { dremnet::write_oracle_csv(os, m); });
  return 0;
}

int cmd_compare(const CommonOptions& o) {
  const auto s = load(o);
  const auto agg = dremnet::run_monte_carlo(s, o.runs, o.seed, o.workers);
  const auto m = dremnet::moment_recursions(s, s.horizon);
  emit(o.out, [&](std::ostream& os) { dremnet::write_compare_csv(os, agg, m); });
  return 0;
}

int cmd_scenario(const CommonOptions& o) {
  const auto s = load(o);
  emit(o.out, [&](std::ostream& os) { os << dremnet::scenario_to_json(s); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed DREM/LMS parameter estimation over directed sensor networks"};
  app.require_subcommand(1);

  CommonOptions run_o, mc_o, pe_o, oracle_o, cmp_o, sc_o;
  std::string trace_path, messages_path, traces_in;
  double omega = 1.0;
  std::size_t max_window = 50;

  auto* run = app.add_subcommand("run", "Single seeded run; per-step estimates and error norms");
  add_common(run, run_o, false);
  run->add_option("--trace", trace_path, "Also write the per-step estimator trace CSV");
  run->add_option("--messages", messages_path, "Also write the DREM message log CSV");

  auto* mc = app.add_subcommand("mc", "Monte Carlo aggregate over seeds seed+1..seed+runs");
  add_common(mc, mc_o, true);

  auto* pe = app.add_subcommand("check-pe", "Audit excitation and step-size assumptions");
  add_common(pe, pe_o, false);
  pe->add_option("--omega", omega, "Excitation level")->capture_default_str();
  pe->add_option("--max-window", max_window, "Largest window H to try")->capture_default_str();
  pe->add_option("--traces", traces_in, "Read delta traces from a message log CSV");

  auto* oracle = app.add_subcommand("oracle", "Exact mean/covariance recursions of the error");
  add_common(oracle, oracle_o, false);

  auto* cmp = app.add_subcommand("compare", "Monte Carlo moments against the oracle recursions");
  add_common(cmp, cmp_o, true);

  auto* sc = app.add_subcommand("scenario", "Print a scenario as JSON");
  add_common(sc, sc_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kValidationFailure;
  }

  try {
    if (*run) return cmd_run(run_o, trace_path, messages_path);
    if (*mc) return cmd_mc(mc_o);
    if (*pe) return cmd_check_pe(pe_o, omega, max_window, traces_in);
    if (*oracle) return cmd_oracle(oracle_o);
    if (*cmp) return cmd_compare(cmp_o);
    if (*sc) return cmd_scenario(sc_o);
  } catch (const dremnet::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const dremnet::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return 0;
}
