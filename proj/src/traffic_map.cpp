#include "traffic_map.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mapf {

TrafficMap::TrafficMap(const Grid& grid, double w_lb, double w_ub)
    : grid_(&grid), w_lb_(w_lb), w_ub_(w_ub)
{
  if (!(w_lb >= 0.0) || !(w_lb < w_ub))
    throw std::runtime_error("traffic map: bounds must satisfy 0 <= w_lb < w_ub");
  w_lb_nano_ = llround(w_lb * 1e9);
  raw_.assign(grid.num_directed_edges(), 0);
  penalty_.assign(grid.num_directed_edges(), w_lb_nano_);
}

void TrafficMap::bump(const HistoryRecord& rec, int64_t sign)
{
  auto touch = [&](int32_t edge) {
    if (sign < 0 && raw_[edge] == 0)
      throw std::runtime_error(
          "traffic map: removing history that was never applied");
    raw_[edge] += sign;
  };
  auto action = [&](int32_t from, int32_t to, bool at_goal) {
    if (from != to) {
      const int32_t e = grid_->edge_index(from, to);
      assert(e != kNoVertex);
      touch(e);
    } else if (!at_goal) {
      // a non-goal wait penalizes every transition through its vertex
      const int32_t begin = grid_->edge_begin(from);
      for (int k = 0; k < grid_->degree(from); ++k) touch(begin + k);
    }
    // goal waits are ignored
  };

  const int n = static_cast<int>(rec.committed.size());
  for (int i = 0; i < n; ++i)
    action(rec.committed[i].from, rec.committed[i].to, rec.at_goal[i] != 0);
  for (const auto& b : rec.blocked)
    action(rec.committed[b.agent].from, b.to, rec.at_goal[b.agent] != 0);
}

void TrafficMap::renormalize()
{
  max_raw_ = raw_.empty() ? 0 : *std::max_element(raw_.begin(), raw_.end());
  if (max_raw_ == 0) {
    std::fill(penalty_.begin(), penalty_.end(), w_lb_nano_);
  } else {
    const double span = w_ub_ - w_lb_;
    const double denom = static_cast<double>(max_raw_);
    for (size_t e = 0; e < raw_.size(); ++e) {
      const double p = w_lb_ + (static_cast<double>(raw_[e]) / denom) * span;
      penalty_[e] = llround(p * 1e9);
    }
  }
  ++version_;
}

void TrafficMap::apply_history(std::span<const HistoryRecord> records)
{
  for (const auto& rec : records) bump(rec, +1);
  renormalize();
}

void TrafficMap::remove_history(std::span<const HistoryRecord> records)
{
  for (const auto& rec : records) bump(rec, -1);
  renormalize();
}

void TrafficMap::dump_csv(std::ostream& out) const
{
  out << "from_x,from_y,to_x,to_y,raw,penalty\n";
  char buf[128];
  for (int32_t v = 0; v < grid_->num_vertices(); ++v) {
    const int32_t begin = grid_->edge_begin(v);
    for (int k = 0; k < grid_->degree(v); ++k) {
      const int32_t e = begin + k;
      const int32_t u = grid_->edge_target(e);
      snprintf(buf, sizeof buf, "%d,%d,%d,%d,%llu,%.9f", grid_->x_of(v),
               grid_->y_of(v), grid_->x_of(u), grid_->y_of(u),
               static_cast<unsigned long long>(raw_[e]), penalty_[e] / 1e9);
      out << buf << '\n';
    }
  }
}

DistanceOracle::DistanceOracle(const TrafficMap& ltm, int32_t goal)
    : ltm_(&ltm), grid_(&ltm.grid()), goal_(goal), bound_version_(ltm.version())
{
  stamp_.assign(grid_->num_vertices(), 0);
  g_.assign(grid_->num_vertices(), kInfCost);
  closed_.assign(grid_->num_vertices(), 0);
  rebind();
}

void DistanceOracle::rebind()
{
  bound_version_ = ltm_->version();
  ++generation_;
  heap_.clear();
  frontier_.clear();
  target_ = kNoVertex;
  stamp_[goal_] = generation_;
  g_[goal_] = 0;
  closed_[goal_] = 0;
  frontier_.push_back(goal_);
  heap_.push_back({0, goal_});
}

int64_t DistanceOracle::heuristic(int32_t v) const
{
  return target_ == kNoVertex
             ? 0
             : static_cast<int64_t>(grid_->manhattan(v, target_)) * kCostUnit;
}

void DistanceOracle::heap_push(int32_t v)
{
  heap_.push_back({g_[v] + heuristic(v), v});
  std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
}

void DistanceOracle::retarget(int32_t target)
{
  target_ = target;
  heap_.clear();
  // rebuild the open heap from the live frontier under the new heuristic
  size_t keep = 0;
  for (int32_t v : frontier_)
    if (!closed_[v]) frontier_[keep++] = v;
  frontier_.resize(keep);
  for (int32_t v : frontier_) heap_.push_back({g_[v] + heuristic(v), v});
  std::make_heap(heap_.begin(), heap_.end(), std::greater<>());
}

void DistanceOracle::stale_error() const
{
  throw std::runtime_error(
      "distance oracle: traffic map changed, oracle must be rebound");
}

int64_t DistanceOracle::resolve(int32_t v)
{
  // The heuristic target is fixed at the first query after a rebind: with a
  // consistent heuristic every pop settles exactly, so later queries resume
  // the same search instead of re-keying the heap.
  if (target_ == kNoVertex) retarget(v);

  // expand the reversed graph: settle u, then relax incoming edges w->u
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
    const auto top = heap_.back();
    heap_.pop_back();
    const int32_t u = top.v;
    if (closed_[u] || top.f != g_[u] + heuristic(u)) continue;  // stale entry
    closed_[u] = 1;
    const int32_t begin = grid_->edge_begin(u);
    const int deg = grid_->degree(u);
    for (int k = 0; k < deg; ++k) {
      const int32_t w = grid_->edge_target(begin + k);
      const int64_t cand = g_[u] + ltm_->cost_nano(grid_->edge_reverse(begin + k));
      if (!discovered(w)) {
        stamp_[w] = generation_;
        closed_[w] = 0;
        g_[w] = cand;
        frontier_.push_back(w);
        heap_push(w);
      } else if (!closed_[w] && cand < g_[w]) {
        g_[w] = cand;
        heap_push(w);
      }
    }
    if (u == v) return g_[v];
  }
  return kInfCost;
}

}  // namespace mapf
