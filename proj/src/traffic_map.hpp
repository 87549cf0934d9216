/*
 * Lightweight Traffic Map: directed edge traffic counters accumulated from
 * generator history, normalized into bounded penalties, plus resumable
 * backward A* distance queries on the weighted graph.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "graph.hpp"

namespace mapf {

// all weighted costs are integers in units of 1e-9 moves; a plain step costs
// exactly kCostUnit, which keeps comparisons and dumps platform-deterministic
constexpr int64_t kCostUnit = 1'000'000'000;
constexpr int64_t kInfCost = INT64_MAX;

struct AgentAction {
  int32_t from;
  int32_t to;
};

struct BlockedAction {
  int32_t agent;
  int32_t to;  // candidate vertex ranked strictly better than the committed one
};

// Everything one generator transition contributes to the traffic map.
struct HistoryRecord {
  uint32_t node_id = 0;                // high-level node that generated it
  std::vector<AgentAction> committed;  // exactly one per agent
  std::vector<uint8_t> at_goal;        // per agent, at the from-configuration
  std::vector<BlockedAction> blocked;
};

class TrafficMap {
 public:
  TrafficMap(const Grid& grid, double w_lb = 0.0, double w_ub = 10.0);

  void apply_history(std::span<const HistoryRecord> records);
  // exact inverse of apply_history; throws on counter underflow
  void remove_history(std::span<const HistoryRecord> records);

  int64_t penalty_nano(int32_t edge) const { return penalty_[edge]; }
  int64_t cost_nano(int32_t edge) const { return kCostUnit + penalty_[edge]; }
  uint64_t raw(int32_t edge) const { return raw_[edge]; }
  uint64_t max_raw() const { return max_raw_; }
  uint64_t version() const { return version_; }
  double w_lb() const { return w_lb_; }
  double w_ub() const { return w_ub_; }
  const Grid& grid() const { return *grid_; }

  const std::vector<uint64_t>& raw_counts() const { return raw_; }

  // rows: from_x,from_y,to_x,to_y,raw,penalty
  void dump_csv(std::ostream& out) const;

 private:
  void bump(const HistoryRecord& rec, int64_t sign);
  void renormalize();

  const Grid* grid_;
  double w_lb_, w_ub_;
  int64_t w_lb_nano_;
  std::vector<uint64_t> raw_;      // per directed edge, grid CSR order
  std::vector<int64_t> penalty_;   // normalized, nano units
  uint64_t max_raw_ = 0;
  uint64_t version_ = 0;
};

// Resumable backward A* from one goal over the reversed weighted graph.
// Settled distances stay exact across queries; the whole state is bound to
// one traffic-map version and must be rebound after any update.
class DistanceOracle {
 public:
  DistanceOracle(const TrafficMap& ltm, int32_t goal);

  // weighted distance from v to the goal; kInfCost if unreachable.
  // Throws if the traffic map changed since the last rebind.
  int64_t distance_nano(int32_t v)
  {
    if (bound_version_ != ltm_->version()) stale_error();
    if (stamp_[v] == generation_ && closed_[v]) return g_[v];  // settled
    return resolve(v);
  }

  void rebind();  // restart from scratch against the current version
  int32_t goal() const { return goal_; }
  uint64_t bound_version() const { return bound_version_; }

 private:
  struct HeapEntry {
    int64_t f;
    int32_t v;
    bool operator>(const HeapEntry& o) const
    {
      return f != o.f ? f > o.f : v > o.v;
    }
  };

  bool discovered(int32_t v) const { return stamp_[v] == generation_; }
  int64_t resolve(int32_t v);  // resume the backward search until v settles
  [[noreturn]] void stale_error() const;
  int64_t heuristic(int32_t v) const;
  void retarget(int32_t target);
  void heap_push(int32_t v);

  const TrafficMap* ltm_;
  const Grid* grid_;
  int32_t goal_;
  uint64_t bound_version_;
  uint32_t generation_ = 0;
  int32_t target_ = kNoVertex;  // heuristic target of the open heap
  std::vector<uint32_t> stamp_;
  std::vector<int64_t> g_;
  std::vector<uint8_t> closed_;
  std::vector<HeapEntry> heap_;          // binary min-heap via std::*_heap
  std::vector<int32_t> frontier_;        // discovered, not yet closed
};

}  // namespace mapf
