#include "graph.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace mapf {

namespace {

void strip_cr(std::string& s)
{
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
}

[[noreturn]] void parse_fail(int line_no, const std::string& what)
{
  throw std::runtime_error("map parse error at line " +
                           std::to_string(line_no) + ": " + what);
}

}  // namespace

Grid::Grid(int width, int height, const std::vector<uint8_t>& passable)
    : width_(width), height_(height)
{
  if (width <= 0 || height <= 0 ||
      passable.size() != static_cast<size_t>(width) * height)
    throw std::runtime_error("grid: bad dimensions");
  cell_to_vertex_.assign(passable.size(), kNoVertex);
  for (size_t c = 0; c < passable.size(); ++c) {
    if (!passable[c]) continue;
    cell_to_vertex_[c] = static_cast<int32_t>(vertex_to_cell_.size());
    vertex_to_cell_.push_back(static_cast<int32_t>(c));
    xs_.push_back(static_cast<int16_t>(c % width));
    ys_.push_back(static_cast<int16_t>(c / width));
  }
  build_adjacency();
}

void Grid::build_adjacency()
{
  const int V = num_vertices();
  adj_off_.assign(V + 1, 0);
  adj_.clear();
  adj_.reserve(static_cast<size_t>(V) * 4);
  // neighbor order: up, left, right, down (row-major cell order)
  const int dx[4] = {0, -1, 1, 0};
  const int dy[4] = {-1, 0, 0, 1};
  for (int32_t v = 0; v < V; ++v) {
    adj_off_[v] = static_cast<int32_t>(adj_.size());
    const int x = x_of(v), y = y_of(v);
    for (int k = 0; k < 4; ++k) {
      const int32_t u = vertex_at(x + dx[k], y + dy[k]);
      if (u != kNoVertex) adj_.push_back(u);
    }
  }
  adj_off_[V] = static_cast<int32_t>(adj_.size());
  rev_edge_.resize(adj_.size());
  for (int32_t v = 0; v < V; ++v)
    for (int32_t e = adj_off_[v]; e < adj_off_[v + 1]; ++e)
      rev_edge_[e] = edge_index(adj_[e], v);
}

int32_t Grid::edge_source(int32_t e) const
{
  auto it = std::upper_bound(adj_off_.begin(), adj_off_.end(), e);
  return static_cast<int32_t>(it - adj_off_.begin()) - 1;
}

Grid Grid::parse_map(std::istream& in)
{
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    strip_cr(line);
    return true;
  };

  if (!next_line() || line.rfind("type", 0) != 0)
    parse_fail(line_no == 0 ? 1 : line_no, "expected 'type ...' header");

  int width = -1, height = -1;
  for (int i = 0; i < 2; ++i) {
    if (!next_line()) parse_fail(line_no + 1, "missing height/width header");
    std::istringstream ss(line);
    std::string key;
    int value = -1;
    ss >> key >> value;
    if (key == "height" && value > 0)
      height = value;
    else if (key == "width" && value > 0)
      width = value;
    else
      parse_fail(line_no, "expected 'height H' or 'width W', got '" + line + "'");
  }
  if (width <= 0 || height <= 0) parse_fail(line_no, "missing width or height");

  if (!next_line() || line != "map")
    parse_fail(line_no == 0 ? 1 : line_no, "expected 'map' line");

  std::vector<uint8_t> passable;
  passable.reserve(static_cast<size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    if (!next_line())
      parse_fail(line_no + 1, "expected " + std::to_string(height) +
                                  " rows, got " + std::to_string(y));
    if (static_cast<int>(line.size()) != width)
      parse_fail(line_no, "row length " + std::to_string(line.size()) +
                              ", expected " + std::to_string(width));
    for (char c : line) {
      switch (c) {
        case '.':
        case 'G':
          passable.push_back(1);
          break;
        case '@':
        case 'T':
        case 'O':
          passable.push_back(0);
          break;
        default:
          parse_fail(line_no, std::string("unknown cell character '") + c + "'");
      }
    }
  }
  return Grid(width, height, passable);
}

Grid Grid::parse_map(const std::string& text)
{
  std::istringstream in(text);
  return parse_map(in);
}

std::string Grid::serialize_map() const
{
  std::string out = "type octile\nheight " + std::to_string(height_) +
                    "\nwidth " + std::to_string(width_) + "\nmap\n";
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out += passable(x, y) ? '.' : '@';
    out += '\n';
  }
  return out;
}

std::vector<int32_t> bfs_dist(const Grid& grid, int32_t goal)
{
  assert(goal >= 0 && goal < grid.num_vertices());
  std::vector<int32_t> dist(grid.num_vertices(), kUnreachable);
  std::deque<int32_t> queue{goal};
  dist[goal] = 0;
  while (!queue.empty()) {
    const int32_t v = queue.front();
    queue.pop_front();
    for (int32_t u : grid.neighbors(v)) {
      if (dist[u] != kUnreachable) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

}  // namespace mapf
