#pragma once

// Time-varying directed communication graph. An edge {from, to} means `to`
// receives from `from` at that step.

#include <string>
#include <vector>

#include "dremnet/model.hpp"

namespace dremnet {

struct Edge {
  SensorIndex from = 0;
  SensorIndex to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;
using NeighborSet = std::vector<SensorIndex>;  // sorted, unique

/// Edges active for every k in [first, last].
struct EdgeTableEntry {
  Step first = 0;
  Step last = 0;
  EdgeList edges;
};

enum class ScheduleKind { kStatic, kPeriodic, kTable };

class GraphSchedule {
 public:
  static GraphSchedule fixed(std::size_t n, EdgeList edges);
  /// E(k) = phases[k mod phases.size()].
  static GraphSchedule periodic(std::size_t n, std::vector<EdgeList> phases);
  /// E(k) is the union of entries whose range contains k; empty elsewhere.
  static GraphSchedule table(std::size_t n, std::vector<EdgeTableEntry> entries);

  /// 0 -> 1 -> ... -> n-1 -> 0.
  static GraphSchedule ring(std::size_t n);
  static GraphSchedule complete(std::size_t n);

  std::size_t sensors() const { return n_; }
  ScheduleKind kind() const { return kind_; }

  EdgeList edges_at(Step k) const;
  const std::vector<EdgeList>& phases() const { return phases_; }
  const std::vector<EdgeTableEntry>& entries() const { return entries_; }

 private:
  GraphSchedule(std::size_t n, ScheduleKind kind) : n_(n), kind_(kind) {}

  std::size_t n_;
  ScheduleKind kind_;
  std::vector<EdgeList> phases_;  // static keeps a single phase
  std::vector<EdgeTableEntry> entries_;
};

NeighborSet in_neighbors(const GraphSchedule& g, SensorIndex i, Step k);
NeighborSet out_neighbors(const GraphSchedule& g, SensorIndex i, Step k);
/// in_neighbors plus the sensor itself.
NeighborSet closed_in_neighborhood(const GraphSchedule& g, SensorIndex i, Step k);

/// Human-readable violations; empty means the schedule is usable.
std::vector<std::string> validate_schedule(const GraphSchedule& g);

/// Per-step in-neighbor lists for k in [0, last], for hot loops.
class NeighborhoodCache {
 public:
  NeighborhoodCache(const GraphSchedule& g, Step last);
  const NeighborSet& in(SensorIndex i, Step k) const;

 private:
  std::size_t n_;
  bool periodic_ = false;
  std::size_t period_ = 1;
  std::vector<NeighborSet> lists_;  // [slot * n + i]
};

}  // namespace dremnet
