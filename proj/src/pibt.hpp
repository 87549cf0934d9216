/*
 * PIBT one-step configuration generator with priority inheritance,
 * backtracking, position constraints, swap handling, and history recording
 */
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "instance.hpp"
#include "solution.hpp"
#include "traffic_map.hpp"

namespace mapf {

// per-agent cost-to-goal used to rank candidate actions, in nano units
struct DistEval {
  virtual ~DistEval() = default;
  virtual int64_t dist(int agent, int32_t v) = 0;
};

// LTM-backed evaluation: one lazily resumed backward search per agent
class OracleEval : public DistEval {
 public:
  OracleEval(const TrafficMap& ltm, const Instance& ins);
  int64_t dist(int agent, int32_t v) override;
  void rebind();  // after every traffic-map update
  DistanceOracle& oracle(int agent) { return *oracles_[agent]; }

 private:
  std::vector<std::unique_ptr<DistanceOracle>> oracles_;
};

struct PositionConstraint {
  std::vector<std::pair<int32_t, int32_t>> pins;  // (agent, forced vertex)
};

// Priority values: fractional base from guidance distances plus one unit per
// step spent away from the goal. Ordering is descending with agent-id ties.
std::vector<float> root_priorities(const Instance& ins, DistEval& eval,
                                   const Config& config);
std::vector<float> inherit_priorities(const std::vector<float>& parent,
                                      const Instance& ins, const Config& config);
std::vector<uint16_t> priority_order(const std::vector<float>& priorities);

class Pibt {
 public:
  Pibt(const Instance& ins, DistEval& eval);

  // Plans one transition. Agents are processed in `order`; pinned agents are
  // placed first. On success fills `to` and, when given, `record`. Returns
  // false (emitting nothing) when no assignment satisfies the constraint.
  bool step(const Config& from, const std::vector<uint16_t>& order,
            const PositionConstraint& constraint, std::mt19937& rng,
            Config& to, HistoryRecord* record);

  // Exposes the swap rule: when the local livelock pattern is detected for
  // `agent`, returns its candidate ordering reversed toward retreat.
  std::optional<std::vector<int32_t>> swap_assist(const Config& from, int agent,
                                                  std::mt19937& rng);

 private:
  bool plan_agent(int agent, std::mt19937& rng);
  void sort_candidates(int agent, std::mt19937& rng, std::vector<int32_t>& buf);
  int swap_target(int agent, int32_t best);
  bool swap_required(int pusher, int puller, int32_t v_pusher, int32_t v_puller);
  bool swap_possible(int32_t v_pusher, int32_t v_puller);

  int occupant_now(int32_t v) const
  {
    return now_stamp_[v] == generation_ ? now_[v] : -1;
  }
  int occupant_next(int32_t v) const
  {
    return next_stamp_[v] == generation_ ? next_[v] : -1;
  }
  void reserve_next(int32_t v, int agent)
  {
    next_stamp_[v] = generation_;
    next_[v] = agent;
  }

  const Instance* ins_;
  DistEval* eval_;
  const Config* from_ = nullptr;
  std::vector<int32_t> v_next_;              // -1 while unplanned
  std::vector<int32_t> now_, next_;          // vertex -> agent
  std::vector<uint32_t> now_stamp_, next_stamp_;
  uint32_t generation_ = 0;
  // sorted candidates and their f-values, valid for the current generation
  std::vector<std::vector<int32_t>> cand_;
  std::vector<std::vector<int64_t>> cand_f_;
  std::vector<uint32_t> cand_stamp_;
  std::vector<std::pair<int64_t, int32_t>> scratch_;
};

}  // namespace mapf
