#include "fixtures.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <stdexcept>

namespace mapf::test {

Grid corridor_grid(int length)
{
  return Grid(length, 1, std::vector<uint8_t>(length, 1));
}

Grid random_grid(std::mt19937& rng, int width, int height, double block_prob)
{
  std::vector<uint8_t> passable(static_cast<size_t>(width) * height, 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (auto& cell : passable) cell = coin(rng) < block_prob ? 0 : 1;
  // keep at least one passable cell
  if (std::find(passable.begin(), passable.end(), 1) == passable.end())
    passable[0] = 1;
  return Grid(width, height, passable);
}

namespace {

std::vector<int32_t> largest_component(const Grid& grid)
{
  std::vector<int32_t> comp(grid.num_vertices(), -1);
  std::vector<int32_t> best;
  for (int32_t s = 0; s < grid.num_vertices(); ++s) {
    if (comp[s] != -1) continue;
    std::vector<int32_t> members{s};
    comp[s] = s;
    std::deque<int32_t> queue{s};
    while (!queue.empty()) {
      const int32_t v = queue.front();
      queue.pop_front();
      for (int32_t u : grid.neighbors(v)) {
        if (comp[u] != -1) continue;
        comp[u] = s;
        members.push_back(u);
        queue.push_back(u);
      }
    }
    if (members.size() > best.size()) best = std::move(members);
  }
  return best;
}

}  // namespace

Instance random_instance(std::mt19937& rng, int width, int height,
                         double block_prob, int n)
{
  for (int attempt = 0; attempt < 100; ++attempt) {
    Grid grid = random_grid(rng, width, height, block_prob);
    auto component = largest_component(grid);
    if (static_cast<int>(component.size()) < std::max(2 * n, n + 1)) continue;
    std::vector<int32_t> starts = component;
    std::shuffle(starts.begin(), starts.end(), rng);
    starts.resize(n);
    std::vector<int32_t> goals = component;
    std::shuffle(goals.begin(), goals.end(), rng);
    goals.resize(n);
    return make_instance(std::move(grid), std::move(starts), std::move(goals));
  }
  throw std::runtime_error("random_instance: could not build a usable grid");
}

Instance make_instance_xy(Grid grid,
                          const std::vector<std::pair<int, int>>& starts,
                          const std::vector<std::pair<int, int>>& goals)
{
  std::vector<int32_t> s, g;
  for (auto [x, y] : starts) s.push_back(grid.vertex_at(x, y));
  for (auto [x, y] : goals) g.push_back(grid.vertex_at(x, y));
  return make_instance(std::move(grid), std::move(s), std::move(g));
}

std::string scen_text(const Instance& ins, const std::string& map_name)
{
  std::string out = "version 1\n";
  const Grid& grid = ins.grid;
  for (int i = 0; i < ins.num_agents(); ++i) {
    out += "0\t" + map_name + "\t" + std::to_string(grid.width()) + "\t" +
           std::to_string(grid.height()) + "\t" +
           std::to_string(grid.x_of(ins.starts[i])) + "\t" +
           std::to_string(grid.y_of(ins.starts[i])) + "\t" +
           std::to_string(grid.x_of(ins.goals[i])) + "\t" +
           std::to_string(grid.y_of(ins.goals[i])) + "\t0\n";
  }
  return out;
}

std::string write_temp_file(const std::string& stem, const std::string& contents)
{
  static int counter = 0;
  const std::string path =
      "/tmp/ltm_mapf_test_" + stem + "_" + std::to_string(counter++) + ".txt";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write temp file " + path);
  out << contents;
  return path;
}

}  // namespace mapf::test
