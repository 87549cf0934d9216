#include "instance.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace mapf {

namespace {

[[noreturn]] void scen_fail(int line_no, const std::string& what)
{
  throw std::runtime_error("scen parse error at line " +
                           std::to_string(line_no) + ": " + what);
}

}  // namespace

Instance make_instance(Grid grid, std::vector<int32_t> starts,
                       std::vector<int32_t> goals)
{
  if (starts.size() != goals.size())
    throw std::runtime_error("instance: start/goal count mismatch");
  if (starts.empty()) throw std::runtime_error("instance: agent count must be positive");

  const int n = static_cast<int>(starts.size());
  std::unordered_set<int32_t> seen_starts, seen_goals;
  for (int i = 0; i < n; ++i) {
    if (starts[i] < 0 || starts[i] >= grid.num_vertices())
      throw std::runtime_error("instance: agent " + std::to_string(i) +
                               " start is not a passable cell");
    if (goals[i] < 0 || goals[i] >= grid.num_vertices())
      throw std::runtime_error("instance: agent " + std::to_string(i) +
                               " goal is not a passable cell");
    if (!seen_starts.insert(starts[i]).second)
      throw std::runtime_error("instance: duplicate start for agent " +
                               std::to_string(i));
    if (!seen_goals.insert(goals[i]).second)
      throw std::runtime_error("instance: duplicate goal for agent " +
                               std::to_string(i));
  }
  // reject unreachable goals upfront
  for (int i = 0; i < n; ++i) {
    const auto dist = bfs_dist(grid, goals[i]);
    if (dist[starts[i]] == kUnreachable)
      throw std::runtime_error("instance: goal of agent " + std::to_string(i) +
                               " is unreachable from its start");
  }
  return Instance{std::move(grid), std::move(starts), std::move(goals)};
}

Instance parse_scen(std::istream& in, int n, Grid grid)
{
  if (n <= 0) throw std::runtime_error("scen: agent count must be positive");

  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line.rfind("version", 0) != 0)
    scen_fail(line_no == 0 ? 1 : line_no, "expected 'version ...' header");

  std::vector<int32_t> starts, goals;
  while (static_cast<int>(starts.size()) < n && next_line()) {
    std::istringstream ss(line);
    int bucket, w, h, sx, sy, gx, gy;
    std::string map_name;
    double optimal;
    if (!(ss >> bucket >> map_name >> w >> h >> sx >> sy >> gx >> gy >> optimal))
      scen_fail(line_no, "malformed entry '" + line + "'");
    if (w != grid.width() || h != grid.height())
      scen_fail(line_no, "dimension mismatch: scen declares " +
                             std::to_string(w) + "x" + std::to_string(h) +
                             ", map is " + std::to_string(grid.width()) + "x" +
                             std::to_string(grid.height()));
    const int agent = static_cast<int>(starts.size());
    const int32_t s = grid.vertex_at(sx, sy);
    const int32_t g = grid.vertex_at(gx, gy);
    if (s == kNoVertex)
      scen_fail(line_no, "start of agent " + std::to_string(agent) +
                             " is on a blocked cell");
    if (g == kNoVertex)
      scen_fail(line_no, "goal of agent " + std::to_string(agent) +
                             " is on a blocked cell");
    starts.push_back(s);
    goals.push_back(g);
  }
  if (static_cast<int>(starts.size()) < n)
    throw std::runtime_error("scen: requested " + std::to_string(n) +
                             " agents but file has only " +
                             std::to_string(starts.size()) + " entries");
  return make_instance(std::move(grid), std::move(starts), std::move(goals));
}

Instance parse_scen(const std::string& text, int n, Grid grid)
{
  std::istringstream in(text);
  return parse_scen(in, n, std::move(grid));
}

Instance load_instance(const std::string& map_path, const std::string& scen_path,
                       int n)
{
  std::ifstream map_in(map_path);
  if (!map_in) throw std::runtime_error("cannot open map file: " + map_path);
  auto grid = Grid::parse_map(map_in);
  std::ifstream scen_in(scen_path);
  if (!scen_in) throw std::runtime_error("cannot open scen file: " + scen_path);
  return parse_scen(scen_in, n, std::move(grid));
}

}  // namespace mapf
