#include "solution.hpp"

#include <stdexcept>
#include <unordered_map>

namespace mapf {

std::string Violation::describe() const
{
  auto agents = [&]() {
    std::string s = "agent " + std::to_string(agent_a);
    if (agent_b >= 0) s += "/" + std::to_string(agent_b);
    return s;
  };
  switch (kind) {
    case ViolationKind::agent_count:
      return "agent count mismatch";
    case ViolationKind::start_mismatch:
      return agents() + " does not begin at its start";
    case ViolationKind::goal_mismatch:
      return agents() + " does not end at its goal";
    case ViolationKind::bad_move:
      return agents() + " makes a non-adjacent move at step " +
             std::to_string(step);
    case ViolationKind::vertex_conflict:
      return agents() + " share a vertex at step " + std::to_string(step);
    case ViolationKind::swap_conflict:
      return agents() + " swap along an edge at step " + std::to_string(step);
  }
  return "unknown violation";
}

ValidationReport validate_solution(const Instance& ins, const Solution& sol)
{
  const int n = ins.num_agents();
  auto fail = [](ViolationKind kind, int step, int a, int b = -1) {
    return ValidationReport{false, Violation{kind, step, a, b}};
  };

  if (sol.empty()) return fail(ViolationKind::agent_count, -1, -1);
  for (const auto& q : sol)
    if (static_cast<int>(q.size()) != n) return fail(ViolationKind::agent_count, -1, -1);

  for (int i = 0; i < n; ++i) {
    if (sol.front()[i] != ins.starts[i])
      return fail(ViolationKind::start_mismatch, 0, i);
    if (sol.back()[i] != ins.goals[i])
      return fail(ViolationKind::goal_mismatch,
                  static_cast<int>(sol.size()) - 1, i);
  }

  std::unordered_map<int32_t, int> occupant;
  for (size_t t = 0; t < sol.size(); ++t) {
    occupant.clear();
    for (int i = 0; i < n; ++i) {
      auto [it, fresh] = occupant.emplace(sol[t][i], i);
      if (!fresh)
        return fail(ViolationKind::vertex_conflict, static_cast<int>(t),
                    it->second, i);
    }
    if (t + 1 == sol.size()) break;
    for (int i = 0; i < n; ++i) {
      const int32_t from = sol[t][i], to = sol[t + 1][i];
      if (from != to && ins.grid.edge_index(from, to) == kNoVertex)
        return fail(ViolationKind::bad_move, static_cast<int>(t), i);
    }
    for (int i = 0; i < n; ++i) {
      // swap: someone occupies my target now and moves to my current vertex
      const int32_t to = sol[t + 1][i];
      if (to == sol[t][i]) continue;
      auto it = occupant.find(to);
      if (it != occupant.end() && it->second != i &&
          sol[t + 1][it->second] == sol[t][i])
        return fail(ViolationKind::swap_conflict, static_cast<int>(t), i,
                    it->second);
    }
  }
  return {};
}

Metrics compute_metrics(const Instance& ins, const Solution& sol,
                        GoalCounting counting)
{
  const auto report = validate_solution(ins, sol);
  if (!report.ok)
    throw std::runtime_error("compute_metrics: invalid solution: " +
                             report.first->describe());

  const int n = ins.num_agents();
  Metrics m;
  m.makespan = static_cast<int>(sol.size()) - 1;
  for (int t = 0; t < m.makespan; ++t) {
    for (int i = 0; i < n; ++i) {
      if (counting == GoalCounting::departing_free) {
        if (sol[t][i] != ins.goals[i]) ++m.sum_of_loss;
      } else {
        if (sol[t][i] != ins.goals[i] || sol[t + 1][i] != ins.goals[i])
          ++m.sum_of_loss;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    m.lower_bound += bfs_dist(ins.grid, ins.goals[i])[ins.starts[i]];
  m.sol_ratio = m.lower_bound == 0
                    ? 1.0
                    : static_cast<double>(m.sum_of_loss) / m.lower_bound;
  return m;
}

uint64_t solution_hash(const Grid& grid, const Solution& sol)
{
  uint64_t h = 14695981039346656037ull;  // FNV-1a over (x,y) pairs
  auto mix = [&](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const auto& q : sol) {
    for (int32_t v : q) {
      mix(static_cast<uint64_t>(grid.x_of(v)));
      mix(static_cast<uint64_t>(grid.y_of(v)));
    }
    mix(0xffffffffull);
  }
  return h;
}

}  // namespace mapf
