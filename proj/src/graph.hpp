/*
 * 4-connected grid graph and MovingAI .map parsing
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mapf {

constexpr int32_t kNoVertex = -1;
constexpr int32_t kUnreachable = -1;

// Passable cells get dense vertex ids; adjacency is stored in CSR form so a
// directed-edge index (used by the traffic map) is just an offset into it.
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, const std::vector<uint8_t>& passable);

  static Grid parse_map(std::istream& in);
  static Grid parse_map(const std::string& text);
  std::string serialize_map() const;

  int width() const { return width_; }
  int height() const { return height_; }
  int num_vertices() const { return static_cast<int>(vertex_to_cell_.size()); }
  int num_directed_edges() const { return static_cast<int>(adj_.size()); }

  bool in_bounds(int x, int y) const
  {
    return 0 <= x && x < width_ && 0 <= y && y < height_;
  }
  bool passable(int x, int y) const
  {
    return in_bounds(x, y) && cell_to_vertex_[y * width_ + x] != kNoVertex;
  }
  int32_t vertex_at(int x, int y) const
  {
    return in_bounds(x, y) ? cell_to_vertex_[y * width_ + x] : kNoVertex;
  }
  int x_of(int32_t v) const { return xs_[v]; }
  int y_of(int32_t v) const { return ys_[v]; }

  std::span<const int32_t> neighbors(int32_t v) const
  {
    return {adj_.data() + adj_off_[v], adj_.data() + adj_off_[v + 1]};
  }
  int degree(int32_t v) const { return adj_off_[v + 1] - adj_off_[v]; }

  // index into the directed-edge arrays, kNoVertex if (from,to) is not an edge
  int32_t edge_index(int32_t from, int32_t to) const
  {
    for (int32_t e = adj_off_[from]; e < adj_off_[from + 1]; ++e)
      if (adj_[e] == to) return e;
    return kNoVertex;
  }
  int32_t edge_begin(int32_t v) const { return adj_off_[v]; }
  int32_t edge_target(int32_t e) const { return adj_[e]; }
  // index of the opposite direction of a directed edge
  int32_t edge_reverse(int32_t e) const { return rev_edge_[e]; }
  // from-vertex of a directed edge index (binary search over offsets)
  int32_t edge_source(int32_t e) const;

  int manhattan(int32_t u, int32_t v) const
  {
    return std::abs(x_of(u) - x_of(v)) + std::abs(y_of(u) - y_of(v));
  }

 private:
  void build_adjacency();

  int width_ = 0;
  int height_ = 0;
  std::vector<int32_t> cell_to_vertex_;  // row-major, kNoVertex if blocked
  std::vector<int32_t> vertex_to_cell_;
  std::vector<int32_t> adj_;       // CSR neighbor lists
  std::vector<int32_t> adj_off_;   // size V+1
  std::vector<int32_t> rev_edge_;  // per edge, index of its reverse
  std::vector<int16_t> xs_, ys_;   // per-vertex coordinates
};

// unit-cost distances from every vertex to goal; kUnreachable where cut off
std::vector<int32_t> bfs_dist(const Grid& grid, int32_t goal);

}  // namespace mapf
