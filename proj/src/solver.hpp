/*
 * anytime driver: one-shot solving under a time limit, and the
 * planning-and-execution protocol with windowed action commitment
 */
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "instance.hpp"
#include "lacam.hpp"
#include "pibt.hpp"
#include "solution.hpp"
#include "traffic_map.hpp"

namespace mapf {

enum class SolveMode { oneshot, pe };

// experimental one-shot restart placement; root is the default and the
// recommended choice
enum class RestartStrategy { root, near_goal };

struct SolveConfig {
  SolveMode mode = SolveMode::oneshot;
  double time_limit_s = 30.0;  // one-shot limit; overall wall cap in PE mode
  double exec_time_s = 0.1;    // PE: seconds per executed action
  int commit_horizon = 5;      // PE: actions committed per window
  double budget_factor = 10.0; // node budget = factor x best makespan
  double w_lb = 0.0;
  double w_ub = 10.0;
  uint64_t seed = 0;
  bool disable_ltm = false;    // uniform guidance forever, no budgets
  RestartStrategy restart = RestartStrategy::root;
  // test harness: total generation pool for the first PE window
  std::optional<uint64_t> first_window_budget;

  void validate() const;  // throws naming the offending field
};

struct AnytimeEvent {
  double time_ms;       // wall clock since solve start
  int64_t sum_of_loss;  // cost of the newly best solution
  int iteration;
};

struct IterationStat {
  int iteration;
  uint64_t budget;  // 0 = unlimited
  RunReason reason;
  uint64_t hl_generated;
  uint64_t ll_generated;
  double time_ms;
};

struct OneshotResult {
  std::optional<Solution> best;
  int64_t best_cost = -1;
  std::optional<Solution> first_solution;  // iteration 1's result
  std::vector<AnytimeEvent> events;
  std::vector<IterationStat> iterations;
  bool search_complete = false;  // optimality was proven before the limit
  double wall_ms = 0.0;
};

struct WindowStat {
  int window;
  bool committed_plan;     // false when the window committed waits
  size_t trace_len_after;
  uint64_t prefix_hash;    // hash of the full committed trace so far
  int runs;
  int64_t incumbent_cost;  // g at the goal node, -1 while unknown
  double time_ms;
};

struct PeResult {
  Solution trace;  // committed configurations, starts first
  bool solved = false;
  std::vector<AnytimeEvent> events;
  std::vector<WindowStat> windows;
  std::vector<IterationStat> iterations;
  std::vector<HistoryRecord> retained_records;  // guidance audit trail
  std::vector<uint64_t> ltm_raw_final;
  double wall_ms = 0.0;
};

class Solver {
 public:
  Solver(const Instance& ins, const SolveConfig& cfg);

  OneshotResult solve_oneshot();
  PeResult solve_pe();

  // Resets the open stack for the next run and refreshes the restarted
  // node's priorities from current guidance distances. One-shot mode
  // restarts at the root; PE mode at the node holding `current`.
  HighLevelNode* select_restart_node(SolveMode mode, const Config* current);

  SearchTree& tree() { return tree_; }
  TrafficMap& traffic_map() { return ltm_; }

 private:
  struct RunSetup {
    bool ready = false;
    uint64_t budget = 0;
  };
  // Seeds the open stack for one more run: restart at `home` while it has
  // pending constraints, otherwise resume the leftover stack, otherwise
  // refill from nodes that could still beat the incumbent. With
  // `prefer_resume` the leftover stack wins over restarting (plain
  // depth-first continuation). Not ready means the reachable space is fully
  // explored relative to the incumbent.
  bool seed_stack(HighLevelNode* home, int64_t best_cost, bool subtree_only,
                  bool prefer_resume);
  uint64_t iteration_budget(int64_t incumbent_makespan) const;
  void absorb_history(std::vector<HistoryRecord>&& records,
                      std::vector<HistoryRecord>* retained);

  const Instance* ins_;
  SolveConfig cfg_;
  TrafficMap ltm_;
  OracleEval eval_;
  Pibt pibt_;
  SearchTree tree_;
  std::mt19937 rng_;
};

}  // namespace mapf
