/*
 * LaCAM* high-level search: depth-first over configurations, one successor
 * per expansion via PIBT, lazy constraint trees, cost relaxation, and
 * early-terminating bounded runs
 */
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "instance.hpp"
#include "pibt.hpp"
#include "solution.hpp"

namespace mapf {

// transition cost under sum-of-loss: agents not yet at their goal, counted
// on the from side so that g at a goal node equals the plan's sum-of-loss
int64_t edge_cost(const Instance& ins, const Config& from, const Config& to);

// Flat FIFO of pending position constraints: each record is
// [len, agent0, vertex0, agent1, vertex1, ...]. Keeping the whole queue in
// one buffer matters; the search allocates hundreds of thousands of nodes.
struct ConstraintCursor {
  std::vector<int32_t> data;
  size_t head = 0;
  bool empty() const { return head >= data.size(); }
  void push_empty() { data.push_back(0); }
};

struct HighLevelNode {
  uint32_t id;
  Config config;
  HighLevelNode* parent;  // rewritten by relaxation
  int64_t g;
  int64_t h;
  std::vector<float> priorities;
  std::vector<uint16_t> order;              // agent processing order, lazy
  ConstraintCursor cursor;                  // pending constraints, BFS order
  std::vector<HighLevelNode*> neighbors;    // discovered outgoing transitions

  const std::vector<uint16_t>& agent_order();
  void link(HighLevelNode* to);
};

class SearchTree {
 public:
  explicit SearchTree(const Instance& ins);

  HighLevelNode* root() { return root_; }
  HighLevelNode* goal_node() { return goal_node_; }
  HighLevelNode* find(const Config& config);
  HighLevelNode* node_by_id(uint32_t id) { return nodes_[id].get(); }
  size_t num_nodes() const { return nodes_.size(); }
  const Instance& instance() const { return *ins_; }

  HighLevelNode* create_node(Config config, HighLevelNode* parent);
  int64_t h_of(const Config& config) const;
  int64_t agent_dist(int agent, int32_t v) const { return dist_tables_[agent][v]; }

  // Yields the next position constraint of a node: the empty constraint
  // first, then a breadth-first extension pinning one more agent per level,
  // candidates in f-sorted order. Returns nullopt once exhausted.
  std::optional<PositionConstraint> next_constraint(
      HighLevelNode& node, const std::vector<uint16_t>& order, DistEval& eval);

  // true if `node`'s parent chain passes through `ancestor`
  bool in_subtree(const HighLevelNode* node, const HighLevelNode* ancestor) const;

  // nodes with pending constraints that could still beat `best_cost`
  std::vector<HighLevelNode*> viable_unexhausted(int64_t best_cost,
                                                 const HighLevelNode* subtree_root);

  std::vector<HighLevelNode*> open;  // DFS stack, back is the top

  uint64_t hl_generations = 0;  // lifetime counters
  uint64_t ll_generations = 0;

 private:
  struct ConfigPtrHash {
    size_t operator()(const Config* c) const;
  };
  struct ConfigPtrEq {
    bool operator()(const Config* a, const Config* b) const { return *a == *b; }
  };

  const Instance* ins_;
  std::vector<std::unique_ptr<HighLevelNode>> nodes_;
  std::unordered_map<const Config*, HighLevelNode*, ConfigPtrHash, ConfigPtrEq>
      explored_;
  std::vector<std::vector<int32_t>> dist_tables_;  // per agent, to its goal
  HighLevelNode* root_ = nullptr;
  HighLevelNode* goal_node_ = nullptr;
};

// Dijkstra-style relaxation: if candidate_parent offers a cheaper path to
// node, rewrite g/parent and propagate decreases best-first through
// discovered neighbors. Improved nodes rejoin the open stack unless
// dominated. Returns whether the goal node's g decreased.
struct RelaxOutcome {
  bool goal_improved = false;
  bool reparented = false;
};
RelaxOutcome relax_g(SearchTree& tree, HighLevelNode* node,
                     HighLevelNode* candidate_parent, int64_t best_cost,
                     const HighLevelNode* frozen);

enum class RunReason { goal, improved, bound, pruned, deadline, exhausted };
const char* to_string(RunReason r);

struct RunLimits {
  uint64_t budget = 0;        // high-level + low-level generations; 0 = unlimited
  int64_t best_sol_cost = -1; // -1 = no incumbent
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
  // skip dominated nodes in-run instead of terminating (plain continuation;
  // there is no traffic collection to cut short)
  bool skip_dominated = false;
};

struct RunResult {
  std::optional<Solution> solution;  // extract_anchor .. goal
  int64_t solution_cost = -1;        // g(goal) - g(anchor) at extraction
  std::vector<HistoryRecord> records;
  RunReason reason = RunReason::exhausted;
  uint64_t hl_generated = 0;
  uint64_t ll_generated = 0;
};

// One bounded run over the tree's open stack (seeded by the caller).
// `extract_anchor` is where extracted plans start (the root in one-shot
// mode, the commit node in planning-and-execution). A non-null
// `subtree_root` restricts expansion to its subtree.
RunResult lacam_run(SearchTree& tree, Pibt& pibt, DistEval& eval,
                    std::mt19937& rng, HighLevelNode* extract_anchor,
                    HighLevelNode* subtree_root, const RunLimits& limits);

Solution extract_plan(const HighLevelNode* goal, const HighLevelNode* anchor);

}  // namespace mapf
