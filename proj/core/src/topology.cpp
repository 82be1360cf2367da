#include "dremnet/topology.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dremnet {

namespace {

void sort_unique(NeighborSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

void check_sensor(const GraphSchedule& g, SensorIndex i) {
  if (i >= g.sensors()) throw std::out_of_range("sensor index out of range");
}

std::string describe(const Edge& e) {
  std::ostringstream os;
  os << "(" << e.from + 1 << "->" << e.to + 1 << ")";
  return os.str();
}

}  // namespace

GraphSchedule GraphSchedule::fixed(std::size_t n, EdgeList edges) {
  GraphSchedule g(n, ScheduleKind::kStatic);
  g.phases_.push_back(std::move(edges));
  return g;
}

GraphSchedule GraphSchedule::periodic(std::size_t n, std::vector<EdgeList> phases) {
  GraphSchedule g(n, ScheduleKind::kPeriodic);
  g.phases_ = std::move(phases);
  return g;
}

GraphSchedule GraphSchedule::table(std::size_t n, std::vector<EdgeTableEntry> entries) {
  GraphSchedule g(n, ScheduleKind::kTable);
  g.entries_ = std::move(entries);
  return g;
}

GraphSchedule GraphSchedule::ring(std::size_t n) {
  EdgeList edges;
  if (n > 1)
    for (SensorIndex i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return fixed(n, std::move(edges));
}

GraphSchedule GraphSchedule::complete(std::size_t n) {
  EdgeList edges;
  for (SensorIndex j = 0; j < n; ++j)
    for (SensorIndex i = 0; i < n; ++i)
      if (i != j) edges.push_back({j, i});
  return fixed(n, std::move(edges));
}

EdgeList GraphSchedule::edges_at(Step k) const {
  switch (kind_) {
    case ScheduleKind::kStatic:
      return phases_.front();
    case ScheduleKind::kPeriodic:
      if (phases_.empty()) return {};
      return phases_[static_cast<std::size_t>(k) % phases_.size()];
    case ScheduleKind::kTable: {
      EdgeList out;
      for (const auto& e : entries_)
        if (e.first <= k && k <= e.last) out.insert(out.end(), e.edges.begin(), e.edges.end());
      return out;
    }
  }
  return {};
}

NeighborSet in_neighbors(const GraphSchedule& g, SensorIndex i, Step k) {
  check_sensor(g, i);
  NeighborSet out;
  for (const Edge& e : g.edges_at(k))
    if (e.to == i && e.from != i) out.push_back(e.from);
  sort_unique(out);
  return out;
}

NeighborSet out_neighbors(const GraphSchedule& g, SensorIndex i, Step k) {
  check_sensor(g, i);
  NeighborSet out;
  for (const Edge& e : g.edges_at(k))
    if (e.from == i && e.to != i) out.push_back(e.to);
  sort_unique(out);
  return out;
}

NeighborSet closed_in_neighborhood(const GraphSchedule& g, SensorIndex i, Step k) {
  NeighborSet out = in_neighbors(g, i, k);
  out.push_back(i);
  sort_unique(out);
  return out;
}

std::vector<std::string> validate_schedule(const GraphSchedule& g) {
  std::vector<std::string> problems;
  if (g.sensors() == 0) problems.emplace_back("graph: sensor count must be >= 1");
  auto check_edges = [&](const EdgeList& edges, const std::string& where) {
    for (const Edge& e : edges) {
      if (e.from >= g.sensors() || e.to >= g.sensors())
        problems.push_back(where + ": edge " + describe(e) + " has an endpoint outside 1.." +
                           std::to_string(g.sensors()));
      else if (e.from == e.to)
        problems.push_back(where + ": self-loop " + describe(e) +
                           " (each sensor already includes itself)");
    }
  };
  switch (g.kind()) {
    case ScheduleKind::kStatic:
      check_edges(g.phases().front(), "graph.edges");
      break;
    case ScheduleKind::kPeriodic:
      if (g.phases().empty()) problems.emplace_back("graph.phases: period must be >= 1");
      for (std::size_t p = 0; p < g.phases().size(); ++p)
        check_edges(g.phases()[p], "graph.phases[" + std::to_string(p) + "]");
      break;
    case ScheduleKind::kTable:
      for (std::size_t t = 0; t < g.entries().size(); ++t) {
        const auto& e = g.entries()[t];
        const std::string where = "graph.entries[" + std::to_string(t) + "]";
        if (e.first < 0 || e.last < e.first)
          problems.push_back(where + ": invalid step range [" + std::to_string(e.first) + ", " +
                             std::to_string(e.last) + "]");
        check_edges(e.edges, where);
      }
      break;
  }
  return problems;
}

NeighborhoodCache::NeighborhoodCache(const GraphSchedule& g, Step last) : n_(g.sensors()) {
  Step slots = last + 1;
  if (g.kind() == ScheduleKind::kStatic) {
    periodic_ = true;
    period_ = 1;
    slots = 1;
  } else if (g.kind() == ScheduleKind::kPeriodic && !g.phases().empty()) {
    periodic_ = true;
    period_ = g.phases().size();
    slots = static_cast<Step>(period_);
  }
  lists_.reserve(static_cast<std::size_t>(std::max<Step>(slots, 0)) * n_);
  for (Step s = 0; s < slots; ++s)
    for (SensorIndex i = 0; i < n_; ++i) lists_.push_back(in_neighbors(g, i, s));
}

const NeighborSet& NeighborhoodCache::in(SensorIndex i, Step k) const {
  const std::size_t slot = periodic_ ? static_cast<std::size_t>(k) % period_
                                     : static_cast<std::size_t>(k);
  return lists_.at(slot * n_ + i);
}

}  // namespace dremnet
