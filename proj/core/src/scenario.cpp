#include "dremnet/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dremnet {

using nlohmann::json;

namespace {

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

Vector as_vector(const json& v, const std::string& path) {
  Vector out;
  for (std::size_t i = 0; i < as_array(v, path).size(); ++i)
    out.push_back(as_number(v[i], at_index(path, i)));
  return out;
}

std::vector<Vector> as_vector_list(const json& v, const std::string& path) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < as_array(v, path).size(); ++i)
    out.push_back(as_vector(v[i], at_index(path, i)));
  return out;
}

// Scalar broadcasts to every sensor.
std::vector<double> per_sensor_numbers(const json& v, std::size_t n, const std::string& path) {
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  return as_vector(v, path);
}

SensorIndex as_sensor(const json& v, const std::string& path) {
  const auto id = as_integer(v, path);
  if (id < 1) fail(path, "sensor ids are 1-based");
  return static_cast<SensorIndex>(id - 1);
}

EdgeList parse_edges(const json& v, const std::string& path) {
  EdgeList edges;
  for (std::size_t e = 0; e < as_array(v, path).size(); ++e) {
    const std::string p = at_index(path, e);
    if (!v[e].is_array() || v[e].size() != 2) fail(p, "expected [from, to]");
    edges.push_back({as_sensor(v[e][0], p + "[0]"), as_sensor(v[e][1], p + "[1]")});
  }
  return edges;
}

RegressorGenerator parse_generator(const json& v, const std::string& path) {
  const std::string kind = as_string(field(v, "kind", path), path + ".kind");
  try {
    if (kind == "periodic-list")
      return RegressorGenerator(PeriodicList{as_vector_list(field(v, "values", path), path + ".values")});
    if (kind == "custom-table")
      return RegressorGenerator(CustomTable{as_vector_list(field(v, "values", path), path + ".values")});
    if (kind == "constant")
      return RegressorGenerator(ConstantRegressor{as_vector(field(v, "value", path), path + ".value")});
    if (kind == "recursive-cosine") {
      RecursiveCosine rc;
      rc.initial = as_vector(field(v, "initial", path), path + ".initial");
      const auto comp = as_integer(field(v, "component", path), path + ".component");
      if (comp < 1) fail(path + ".component", "components are 1-based");
      rc.component = static_cast<std::size_t>(comp - 1);
      const json& angle = field(v, "angle_pi_fraction", path);
      if (!angle.is_array() || angle.size() != 2)
        fail(path + ".angle_pi_fraction", "expected [numerator, denominator]");
      rc.angle_numerator = as_integer(angle[0], path + ".angle_pi_fraction[0]");
      rc.angle_denominator = as_integer(angle[1], path + ".angle_pi_fraction[1]");
      return RegressorGenerator(rc);
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown regressor kind '" + kind + "'");
}

GraphSchedule parse_graph(const json& v, std::size_t n, const std::string& path) {
  if (const json* sensors = optional_field(v, "sensors")) {
    if (as_integer(*sensors, path + ".sensors") != static_cast<std::int64_t>(n))
      fail(path + ".sensors", "does not match the number of regressors (" + std::to_string(n) + ")");
  }
  const std::string kind = as_string(field(v, "kind", path), path + ".kind");
  if (kind == "static") return GraphSchedule::fixed(n, parse_edges(field(v, "edges", path), path + ".edges"));
  if (kind == "ring") return GraphSchedule::ring(n);
  if (kind == "complete") return GraphSchedule::complete(n);
  if (kind == "periodic") {
    const json& phases = as_array(field(v, "phases", path), path + ".phases");
    std::vector<EdgeList> out;
    for (std::size_t p = 0; p < phases.size(); ++p)
      out.push_back(parse_edges(phases[p], at_index(path + ".phases", p)));
    return GraphSchedule::periodic(n, std::move(out));
  }
  if (kind == "table") {
    const json& entries = as_array(field(v, "entries", path), path + ".entries");
    std::vector<EdgeTableEntry> out;
    for (std::size_t t = 0; t < entries.size(); ++t) {
      const std::string p = at_index(path + ".entries", t);
      out.push_back({as_integer(field(entries[t], "from_k", p), p + ".from_k"),
                     as_integer(field(entries[t], "to_k", p), p + ".to_k"),
                     parse_edges(field(entries[t], "edges", p), p + ".edges")});
    }
    return GraphSchedule::table(n, std::move(out));
  }
  fail(path + ".kind", "unknown graph kind '" + kind + "'");
}

StepSchedule parse_step(const json& v, const std::string& path) {
  const std::string kind = as_string(field(v, "kind", path), path + ".kind");
  if (kind == "harmonic") return StepSchedule::harmonic(as_number(field(v, "c", path), path + ".c"));
  if (kind == "constant")
    return StepSchedule::constant(as_number(field(v, "value", path), path + ".value"));
  if (kind == "table") return StepSchedule::table(as_vector(field(v, "values", path), path + ".values"));
  fail(path + ".kind", "unknown step-size kind '" + kind + "'");
}

Scenario from_json(const json& root) {
  Scenario s;
  if (!root.is_object()) fail("<root>", "expected an object");
  if (const json* name = optional_field(root, "name")) s.name = as_string(*name, "name");

  const json& model = field(root, "model", "<root>");
  const auto d = as_integer(field(model, "dimension", "model"), "model.dimension");
  if (d < 1) fail("model.dimension", "must be >= 1");
  s.d = static_cast<std::size_t>(d);
  try {
    s.theta = Parameter(as_vector(field(model, "theta", "model"), "model.theta"));
  } catch (const std::invalid_argument& e) {
    fail("model.theta", e.what());
  }
  const json& regs = as_array(field(model, "regressors", "model"), "model.regressors");
  for (std::size_t i = 0; i < regs.size(); ++i)
    s.generators.push_back(parse_generator(regs[i], at_index("model.regressors", i)));
  s.n = s.generators.size();
  s.noise_variance =
      per_sensor_numbers(field(model, "noise_variance", "model"), s.n, "model.noise_variance");

  s.graph = parse_graph(field(root, "graph", "<root>"), s.n, "graph");

  const json& est = field(root, "estimator", "<root>");
  s.schedule = parse_step(field(est, "step_size", "estimator"), "estimator.step_size");
  s.mu = per_sensor_numbers(field(est, "mu", "estimator"), s.n, "estimator.mu");
  if (const json* init = optional_field(est, "initial_estimate")) {
    if (init->is_array() && !init->empty() && init->front().is_array())
      s.theta_hat0 = as_vector_list(*init, "estimator.initial_estimate");
    else
      s.theta_hat0.assign(s.n, as_vector(*init, "estimator.initial_estimate"));
  } else {
    s.theta_hat0.assign(s.n, Vector(s.d, 0.0));
  }

  if (const json* run = optional_field(root, "run"))
    if (const json* h = optional_field(*run, "horizon")) s.horizon = as_integer(*h, "run.horizon");
  return s;
}

json edges_json(const EdgeList& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back({e.from + 1, e.to + 1});
  return out;
}

}  // namespace

std::vector<std::string> scenario_violations(const Scenario& s) {
  std::vector<std::string> out;
  auto add = [&](const std::string& f, const std::string& what) { out.push_back(f + ": " + what); };
  if (s.n < 1) add("model.regressors", "need at least one sensor");
  if (s.d < 1) add("model.dimension", "must be >= 1");
  if (s.theta.dimension() != s.d) add("model.theta", "length must equal model.dimension");
  if (s.generators.size() != s.n) add("model.regressors", "one generator per sensor required");
  for (std::size_t i = 0; i < s.generators.size(); ++i)
    if (s.generators[i].dimension() != s.d)
      add(at_index("model.regressors", i), "generator dimension " +
                                               std::to_string(s.generators[i].dimension()) +
                                               " does not match model.dimension " +
                                               std::to_string(s.d));
  if (s.noise_variance.size() != s.n) add("model.noise_variance", "one entry per sensor required");
  for (std::size_t i = 0; i < s.noise_variance.size(); ++i)
    if (!(s.noise_variance[i] >= 0.0) || !std::isfinite(s.noise_variance[i]))
      add(at_index("model.noise_variance", i), "must be finite and >= 0");
  if (s.mu.size() != s.n) add("estimator.mu", "one entry per sensor required");
  for (std::size_t i = 0; i < s.mu.size(); ++i)
    if (!(s.mu[i] > 0.0) || !std::isfinite(s.mu[i]))
      add(at_index("estimator.mu", i), "must be > 0 (sensor " + std::to_string(i + 1) + ")");
  if (s.theta_hat0.size() != s.n) add("estimator.initial_estimate", "one estimate per sensor required");
  for (std::size_t i = 0; i < s.theta_hat0.size(); ++i) {
    const auto& v = s.theta_hat0[i];
    bool finite = true;
    for (double x : v) finite = finite && std::isfinite(x);
    if (v.size() != s.d || !finite)
      add(at_index("estimator.initial_estimate", i), "must be a finite vector of length model.dimension");
  }
  switch (s.schedule.kind) {
    case StepKind::kHarmonic:
      if (!(s.schedule.c > 0.0)) add("estimator.step_size.c", "must be > 0");
      break;
    case StepKind::kConstant:
      if (!(s.schedule.c > 0.0 && s.schedule.c <= 1.0))
        add("estimator.step_size.value", "must lie in (0, 1]");
      break;
    case StepKind::kTable:
      if (s.schedule.values.empty()) add("estimator.step_size.values", "must not be empty");
      for (std::size_t k = 0; k < s.schedule.values.size(); ++k)
        if (!(s.schedule.values[k] > 0.0 && s.schedule.values[k] <= 1.0))
          add(at_index("estimator.step_size.values", k), "must lie in (0, 1]");
      break;
  }
  if (s.graph.sensors() != s.n) add("graph", "sensor count does not match model.regressors");
  for (const auto& p : validate_schedule(s.graph)) out.push_back(p);
  if (s.horizon < 0) add("run.horizon", "must be >= 0");
  return out;
}

void validate_scenario(const Scenario& s) {
  const auto problems = scenario_violations(s);
  if (problems.empty()) return;
  std::string msg = "invalid scenario";
  if (!s.name.empty()) msg += " '" + s.name + "'";
  for (const auto& p : problems) msg += "\n  " + p;
  throw ScenarioError(msg);
}

Scenario four_sensor_reference(double noise_variance) {
  Scenario s;
  s.name = noise_variance == 0.0 ? "sec5-noiseless" : "sec5";
  s.n = 4;
  s.d = 2;
  s.theta = Parameter({2.5, -1.0});
  s.generators = {
      RegressorGenerator(PeriodicList{{{2.0, 3.0}, {1.0, 2.0}}}),  // even k, odd k
      RegressorGenerator(RecursiveCosine{{1.0, 1.0}, 0, 1, 4}),    // a(k), step cos(k pi/4)
      RegressorGenerator(RecursiveCosine{{1.0, 2.0}, 1, 1, 2}),    // b(k), step cos(k pi/2)
      RegressorGenerator(ConstantRegressor{{1.0, 1.0}}),
  };
  s.noise_variance.assign(4, noise_variance);
  s.graph = GraphSchedule::ring(4);
  s.schedule = StepSchedule::harmonic(0.7);
  s.mu = {0.1, 0.2, 0.3, 0.4};
  s.theta_hat0.assign(4, Vector{0.0, 0.0});
  s.horizon = 500;
  return s;
}

std::vector<std::string> builtin_names() {
  return {"sec5", "ring4", "sec5-noiseless", "constant-regressor"};
}

bool is_builtin(std::string_view name) {
  for (const auto& b : builtin_names())
    if (b == name) return true;
  return false;
}

Scenario builtin_scenario(std::string_view name) {
  if (name == "sec5" || name == "ring4") return four_sensor_reference(1.0);
  if (name == "sec5-noiseless") return four_sensor_reference(0.0);
  if (name == "constant-regressor") {
    Scenario s;
    s.name = "constant-regressor";
    s.n = 1;
    s.d = 2;
    s.theta = Parameter({2.5, -1.0});
    s.generators = {RegressorGenerator(ConstantRegressor{{1.0, 1.0}})};
    s.noise_variance = {1.0};
    s.graph = GraphSchedule::fixed(1, {});
    s.schedule = StepSchedule::harmonic(0.7);
    s.mu = {0.1};
    s.theta_hat0 = {{0.0, 0.0}};
    s.horizon = 500;
    return s;
  }
  throw ScenarioError("unknown builtin scenario '" + std::string(name) + "'");
}

Scenario parse_scenario(std::string_view json_text, std::string_view origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, json_text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (json_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError(std::string(origin) + ":" + std::to_string(line) + ":" +
                        std::to_string(col) + ": syntax error: " + e.what());
  }
  Scenario s = from_json(root);
  validate_scenario(s);
  return s;
}

Scenario load_scenario(std::string_view source) {
  if (is_builtin(source)) return builtin_scenario(source);
  const std::string path(source);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading scenario file '" + path + "'");
  return parse_scenario(buf.str(), path);
}

std::string scenario_to_json(const Scenario& s) {
  json root;
  root["name"] = s.name;
  json regs = json::array();
  for (const auto& g : s.generators) {
    std::visit(
        [&](const auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, PeriodicList>)
            regs.push_back({{"kind", "periodic-list"}, {"values", spec.values}});
          else if constexpr (std::is_same_v<T, CustomTable>)
            regs.push_back({{"kind", "custom-table"}, {"values", spec.values}});
          else if constexpr (std::is_same_v<T, ConstantRegressor>)
            regs.push_back({{"kind", "constant"}, {"value", spec.value}});
          else
            regs.push_back({{"kind", "recursive-cosine"},
                            {"initial", spec.initial},
                            {"component", spec.component + 1},
                            {"angle_pi_fraction", {spec.angle_numerator, spec.angle_denominator}}});
        },
        g.spec());
  }
  root["model"] = {{"dimension", s.d},
                   {"theta", s.theta.entries()},
                   {"noise_variance", s.noise_variance},
                   {"regressors", regs}};

  json graph;
  graph["sensors"] = s.graph.sensors();
  switch (s.graph.kind()) {
    case ScheduleKind::kStatic:
      graph["kind"] = "static";
      graph["edges"] = edges_json(s.graph.phases().front());
      break;
    case ScheduleKind::kPeriodic: {
      graph["kind"] = "periodic";
      json phases = json::array();
      for (const auto& p : s.graph.phases()) phases.push_back(edges_json(p));
      graph["phases"] = phases;
      break;
    }
    case ScheduleKind::kTable: {
      graph["kind"] = "table";
      json entries = json::array();
      for (const auto& e : s.graph.entries())
        entries.push_back({{"from_k", e.first}, {"to_k", e.last}, {"edges", edges_json(e.edges)}});
      graph["entries"] = entries;
      break;
    }
  }
  root["graph"] = graph;

  json step;
  switch (s.schedule.kind) {
    case StepKind::kHarmonic:
      step = {{"kind", "harmonic"}, {"c", s.schedule.c}};
      break;
    case StepKind::kConstant:
      step = {{"kind", "constant"}, {"value", s.schedule.c}};
      break;
    case StepKind::kTable:
      step = {{"kind", "table"}, {"values", s.schedule.values}};
      break;
  }
  root["estimator"] = {{"step_size", step}, {"mu", s.mu}, {"initial_estimate", s.theta_hat0}};
  root["run"] = {{"horizon", s.horizon}};
  return root.dump(2) + "\n";
}

}  // namespace dremnet
