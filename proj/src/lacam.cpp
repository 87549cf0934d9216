#include "lacam.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>

namespace mapf {

int64_t edge_cost(const Instance& ins, const Config& from,
                  [[maybe_unused]] const Config& to)
{
  assert(from.size() == to.size());
  int64_t cost = 0;
  for (int i = 0; i < ins.num_agents(); ++i)
    if (from[i] != ins.goals[i]) ++cost;
  return cost;
}

const std::vector<uint16_t>& HighLevelNode::agent_order()
{
  if (order.empty()) order = priority_order(priorities);
  return order;
}

void HighLevelNode::link(HighLevelNode* to)
{
  if (std::find(neighbors.begin(), neighbors.end(), to) == neighbors.end())
    neighbors.push_back(to);
}

size_t SearchTree::ConfigPtrHash::operator()(const Config* c) const
{
  uint64_t h = 14695981039346656037ull;
  for (int32_t v : *c) {
    h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

SearchTree::SearchTree(const Instance& ins) : ins_(&ins)
{
  dist_tables_.reserve(ins.num_agents());
  for (int i = 0; i < ins.num_agents(); ++i)
    dist_tables_.push_back(bfs_dist(ins.grid, ins.goals[i]));
  root_ = create_node(ins.starts, nullptr);
  open.push_back(root_);
}

int64_t SearchTree::h_of(const Config& config) const
{
  int64_t h = 0;
  for (size_t i = 0; i < config.size(); ++i) {
    const int32_t d = dist_tables_[i][config[i]];
    assert(d != kUnreachable);
    h += d;
  }
  return h;
}

HighLevelNode* SearchTree::find(const Config& config)
{
  auto it = explored_.find(&config);
  return it == explored_.end() ? nullptr : it->second;
}

HighLevelNode* SearchTree::create_node(Config config, HighLevelNode* parent)
{
  auto node = std::make_unique<HighLevelNode>();
  node->id = static_cast<uint32_t>(nodes_.size());
  node->config = std::move(config);
  node->parent = parent;
  node->h = h_of(node->config);
  if (parent == nullptr) {
    node->g = 0;
    node->priorities.assign(node->config.size(), 0.0f);
  } else {
    node->g = parent->g + edge_cost(*ins_, parent->config, node->config);
    node->priorities =
        inherit_priorities(parent->priorities, *ins_, node->config);
    parent->link(node.get());
  }
  node->cursor.push_empty();  // the empty constraint comes first
  HighLevelNode* raw = node.get();
  nodes_.push_back(std::move(node));
  explored_.emplace(&raw->config, raw);
  ++hl_generations;
  if (raw->config == ins_->goals) goal_node_ = raw;
  return raw;
}

std::optional<PositionConstraint> SearchTree::next_constraint(
    HighLevelNode& node, const std::vector<uint16_t>& order, DistEval& eval)
{
  auto& cur = node.cursor;
  if (cur.empty()) return std::nullopt;

  // pop the front record [len, (agent, vertex)*len]
  const size_t base = cur.head;
  const int len = cur.data[base];
  cur.head = base + 1 + 2 * static_cast<size_t>(len);
  ++ll_generations;

  PositionConstraint pc;
  pc.pins.reserve(len);
  for (int k = 0; k < len; ++k)
    pc.pins.emplace_back(cur.data[base + 1 + 2 * k],
                         cur.data[base + 2 + 2 * k]);

  const int n = ins_->num_agents();
  if (len < n) {
    // extend breadth-first: pin the next unpinned agent in priority order
    int next_agent = -1;
    for (uint16_t a : order) {
      bool pinned = false;
      for (const auto& [agent, v] : pc.pins) pinned = pinned || agent == a;
      if (!pinned) {
        next_agent = a;
        break;
      }
    }
    assert(next_agent >= 0);
    const int32_t v = node.config[next_agent];
    std::vector<int32_t> cands{v};
    for (int32_t u : ins_->grid.neighbors(v)) cands.push_back(u);
    std::sort(cands.begin(), cands.end(), [&](int32_t a, int32_t b) {
      const int64_t da = eval.dist(next_agent, a), db = eval.dist(next_agent, b);
      return da != db ? da < db : a < b;
    });
    for (int32_t c : cands) {
      cur.data.push_back(len + 1);
      for (const auto& [agent, vtx] : pc.pins) {
        cur.data.push_back(agent);
        cur.data.push_back(vtx);
      }
      cur.data.push_back(next_agent);
      cur.data.push_back(c);
    }
  }
  return pc;
}

bool SearchTree::in_subtree(const HighLevelNode* node,
                            const HighLevelNode* ancestor) const
{
  for (const HighLevelNode* p = node; p != nullptr; p = p->parent)
    if (p == ancestor) return true;
  return false;
}

std::vector<HighLevelNode*> SearchTree::viable_unexhausted(
    int64_t best_cost, const HighLevelNode* subtree_root)
{
  std::vector<HighLevelNode*> out;
  for (auto& node : nodes_) {
    if (node->cursor.empty()) continue;
    if (best_cost >= 0 && node->g + node->h >= best_cost) continue;
    if (subtree_root != nullptr && !in_subtree(node.get(), subtree_root))
      continue;
    out.push_back(node.get());
  }
  return out;  // ascending id: oldest at the bottom of a refilled stack
}

RelaxOutcome relax_g(SearchTree& tree, HighLevelNode* node,
                     HighLevelNode* candidate_parent, int64_t best_cost,
                     const HighLevelNode* frozen)
{
  const Instance& ins = tree.instance();
  candidate_parent->link(node);

  RelaxOutcome out;
  using Entry = std::pair<int64_t, HighLevelNode*>;
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first > b.first : a.second->id > b.second->id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);

  auto try_improve = [&](HighLevelNode* src, HighLevelNode* dst) {
    if (dst == frozen) return;
    const int64_t cand = src->g + edge_cost(ins, src->config, dst->config);
    if (cand >= dst->g) return;
    dst->g = cand;
    dst->parent = src;
    out.reparented = true;
    if (dst == tree.goal_node()) out.goal_improved = true;
    queue.push({cand, dst});
    if (best_cost < 0 || dst->g + dst->h < best_cost) tree.open.push_back(dst);
  };

  try_improve(candidate_parent, node);
  while (!queue.empty()) {
    auto [g, src] = queue.top();
    queue.pop();
    if (g != src->g) continue;  // stale
    for (HighLevelNode* nb : src->neighbors) try_improve(src, nb);
  }
  return out;
}

const char* to_string(RunReason r)
{
  switch (r) {
    case RunReason::goal: return "goal";
    case RunReason::improved: return "improved";
    case RunReason::bound: return "bound";
    case RunReason::pruned: return "pruned";
    case RunReason::deadline: return "deadline";
    case RunReason::exhausted: return "exhausted";
  }
  return "?";
}

Solution extract_plan(const HighLevelNode* goal, const HighLevelNode* anchor)
{
  std::vector<Config> rev;
  for (const HighLevelNode* p = goal;; p = p->parent) {
    if (p == nullptr) throw std::logic_error("extract_plan: anchor not on chain");
    rev.push_back(p->config);
    if (p == anchor) break;
  }
  return {rev.rbegin(), rev.rend()};
}

RunResult lacam_run(SearchTree& tree, Pibt& pibt, DistEval& eval,
                    std::mt19937& rng, HighLevelNode* extract_anchor,
                    HighLevelNode* subtree_root, const RunLimits& limits)
{
  RunResult res;
  const uint64_t hl0 = tree.hl_generations, ll0 = tree.ll_generations;
  auto gens = [&] {
    return (tree.hl_generations - hl0) + (tree.ll_generations - ll0);
  };
  auto finish = [&](RunReason reason) {
    res.reason = reason;
    res.hl_generated = tree.hl_generations - hl0;
    res.ll_generated = tree.ll_generations - ll0;
    return res;
  };
  auto extract = [&] {
    res.solution = extract_plan(tree.goal_node(), extract_anchor);
    res.solution_cost = tree.goal_node()->g - extract_anchor->g;
  };

  while (!tree.open.empty()) {
    if (limits.has_deadline &&
        std::chrono::steady_clock::now() >= limits.deadline)
      return finish(RunReason::deadline);
    if (limits.budget != 0 && gens() >= limits.budget)
      return finish(RunReason::bound);

    HighLevelNode* node = tree.open.back();

    if (node == tree.goal_node()) {
      tree.open.pop_back();
      extract();
      return finish(RunReason::goal);
    }
    if (limits.best_sol_cost >= 0 && node->g + node->h >= limits.best_sol_cost) {
      tree.open.pop_back();  // dominated: cannot lead to an improvement
      if (limits.skip_dominated) continue;
      return finish(RunReason::pruned);
    }

    const auto& order = node->agent_order();
    const auto constraint = tree.next_constraint(*node, order, eval);
    if (!constraint) {
      tree.open.pop_back();
      continue;
    }

    Config to;
    HistoryRecord record;
    if (!pibt.step(node->config, order, *constraint, rng, to, &record))
      continue;  // infeasible constraint
    record.node_id = node->id;

    if (HighLevelNode* existing = tree.find(to)) {
      res.records.push_back(std::move(record));
      const auto outcome =
          relax_g(tree, existing, node, limits.best_sol_cost, extract_anchor);
      if (subtree_root == nullptr || tree.in_subtree(existing, subtree_root))
        tree.open.push_back(existing);
      if (outcome.goal_improved) {
        extract();
        return finish(RunReason::improved);
      }
    } else {
      HighLevelNode* child = tree.create_node(std::move(to), node);
      res.records.push_back(std::move(record));
      tree.open.push_back(child);
    }
  }
  return finish(RunReason::exhausted);
}

}  // namespace mapf
