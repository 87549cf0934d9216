/*
 * MAPF instance and MovingAI .scen parsing
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graph.hpp"

namespace mapf {

struct Instance {
  Grid grid;
  std::vector<int32_t> starts;  // vertex id per agent
  std::vector<int32_t> goals;

  int num_agents() const { return static_cast<int>(starts.size()); }
  bool at_goal(int agent, int32_t v) const { return goals[agent] == v; }
};

// Validates the instance invariants: positive agent count, distinct starts,
// distinct goals, all on passable cells, every goal reachable from its start.
// Throws on violation, naming the offending agent.
Instance make_instance(Grid grid, std::vector<int32_t> starts,
                       std::vector<int32_t> goals);

// First n entries of a MovingAI scenario file, cross-checked against grid.
Instance parse_scen(std::istream& in, int n, Grid grid);
Instance parse_scen(const std::string& text, int n, Grid grid);

Instance load_instance(const std::string& map_path, const std::string& scen_path,
                       int n);

}  // namespace mapf
