/*
 * configurations, solutions, validation, and sum-of-loss metrics
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "instance.hpp"

namespace mapf {

using Config = std::vector<int32_t>;    // one vertex per agent
using Solution = std::vector<Config>;   // per-timestep configurations

enum class ViolationKind {
  agent_count,
  start_mismatch,
  goal_mismatch,
  bad_move,
  vertex_conflict,
  swap_conflict,
};

struct Violation {
  ViolationKind kind;
  int step = -1;      // step index (transition violations refer to the from-step)
  int agent_a = -1;
  int agent_b = -1;   // second agent for conflicts, -1 otherwise
  std::string describe() const;
};

struct ValidationReport {
  bool ok = true;
  std::optional<Violation> first;
};

ValidationReport validate_solution(const Instance& ins, const Solution& sol);

// How waits interact with the per-step not-at-goal count. `departing_free`
// counts an agent by its from-vertex, so a step leaving the goal costs
// nothing; `strict` charges any step unless both endpoints are the goal.
enum class GoalCounting { departing_free, strict };

struct Metrics {
  int64_t sum_of_loss = 0;
  int64_t lower_bound = 0;  // sum of individual shortest-path distances
  double sol_ratio = 1.0;   // 1 when lower_bound is 0
  int makespan = 0;
};

// Requires a valid solution; throws otherwise.
Metrics compute_metrics(const Instance& ins, const Solution& sol,
                        GoalCounting counting = GoalCounting::departing_free);

// stable 64-bit hash of a configuration sequence (used for commit auditing)
uint64_t solution_hash(const Grid& grid, const Solution& sol);

}  // namespace mapf
