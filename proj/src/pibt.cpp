#include "pibt.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mapf {

OracleEval::OracleEval(const TrafficMap& ltm, const Instance& ins)
{
  oracles_.reserve(ins.num_agents());
  for (int i = 0; i < ins.num_agents(); ++i)
    oracles_.push_back(std::make_unique<DistanceOracle>(ltm, ins.goals[i]));
}

int64_t OracleEval::dist(int agent, int32_t v)
{
  return oracles_[agent]->distance_nano(v);
}

void OracleEval::rebind()
{
  for (auto& o : oracles_) o->rebind();
}

std::vector<float> root_priorities(const Instance& ins, DistEval& eval,
                                   const Config& config)
{
  const int n = ins.num_agents();
  std::vector<int64_t> d(n);
  int64_t max_d = 0;
  for (int i = 0; i < n; ++i) {
    d[i] = eval.dist(i, config[i]);
    assert(d[i] != kInfCost);
    max_d = std::max(max_d, d[i]);
  }
  std::vector<float> prio(n);
  for (int i = 0; i < n; ++i)
    prio[i] = static_cast<float>(static_cast<double>(d[i]) /
                                 static_cast<double>(max_d + kCostUnit));
  return prio;
}

std::vector<float> inherit_priorities(const std::vector<float>& parent,
                                      const Instance& ins, const Config& config)
{
  std::vector<float> prio(parent.size());
  for (size_t i = 0; i < parent.size(); ++i) {
    if (config[i] != ins.goals[i])
      prio[i] = parent[i] + 1.0f;
    else
      prio[i] = parent[i] - std::floor(parent[i]);
  }
  return prio;
}

std::vector<uint16_t> priority_order(const std::vector<float>& priorities)
{
  assert(priorities.size() < 65536);
  std::vector<uint16_t> order(priorities.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](uint16_t a, uint16_t b) {
    if (priorities[a] != priorities[b]) return priorities[a] > priorities[b];
    return a < b;
  });
  return order;
}

Pibt::Pibt(const Instance& ins, DistEval& eval) : ins_(&ins), eval_(&eval)
{
  const int n = ins.num_agents();
  const int V = ins.grid.num_vertices();
  v_next_.assign(n, -1);
  now_.assign(V, -1);
  next_.assign(V, -1);
  now_stamp_.assign(V, 0);
  next_stamp_.assign(V, 0);
  cand_.resize(n);
  cand_f_.resize(n);
  cand_stamp_.assign(n, 0);
}

void Pibt::sort_candidates(int agent, std::mt19937& rng,
                           std::vector<int32_t>& buf)
{
  const int32_t v = (*from_)[agent];
  scratch_.clear();
  scratch_.push_back({0, v});
  for (int32_t u : ins_->grid.neighbors(v)) scratch_.push_back({0, u});
  std::shuffle(scratch_.begin(), scratch_.end(), rng);  // randomized tie-break
  for (auto& [f, u] : scratch_) f = eval_->dist(agent, u);
  // stable insertion sort; candidate sets have at most five entries
  for (size_t i = 1; i < scratch_.size(); ++i) {
    const auto item = scratch_[i];
    size_t j = i;
    for (; j > 0 && scratch_[j - 1].first > item.first; --j)
      scratch_[j] = scratch_[j - 1];
    scratch_[j] = item;
  }
  buf.clear();
  auto& fbuf = cand_f_[agent];
  fbuf.clear();
  for (const auto& [f, u] : scratch_) {
    buf.push_back(u);
    fbuf.push_back(f);
  }
  cand_stamp_[agent] = generation_;
}

int Pibt::swap_target(int agent, int32_t best)
{
  const int32_t v_now = (*from_)[agent];
  if (best == v_now) return -1;

  // two agents meeting head-on
  const int aj = occupant_now(best);
  if (aj != -1 && v_next_[aj] == -1 &&
      swap_required(agent, aj, v_now, (*from_)[aj]) &&
      swap_possible((*from_)[aj], v_now))
    return aj;

  // clear operation: a neighbor needs this agent's spot to pass
  for (int32_t u : ins_->grid.neighbors(v_now)) {
    const int ak = occupant_now(u);
    if (ak == -1 || best == u) continue;
    if (swap_required(ak, agent, v_now, best) && swap_possible(best, v_now))
      return ak;
  }
  return -1;
}

bool Pibt::swap_required(int pusher, int puller, int32_t v_pusher,
                         int32_t v_puller)
{
  int32_t tmp = kNoVertex;
  while (eval_->dist(pusher, v_puller) < eval_->dist(pusher, v_pusher)) {
    int n = ins_->grid.degree(v_puller);
    for (int32_t u : ins_->grid.neighbors(v_puller)) {
      const int a = occupant_now(u);
      if (u == v_pusher ||
          (ins_->grid.degree(u) == 1 && a != -1 && ins_->goals[a] == u)) {
        --n;  // dead end occupied by a finished agent cannot be used to pull
      } else {
        tmp = u;
      }
    }
    if (n >= 2) return false;  // enough room, no swap needed
    if (n <= 0) break;
    v_pusher = v_puller;
    v_puller = tmp;
  }
  return (eval_->dist(puller, v_pusher) < eval_->dist(puller, v_puller)) &&
         (eval_->dist(pusher, v_pusher) == 0 ||
          eval_->dist(pusher, v_puller) < eval_->dist(pusher, v_pusher));
}

bool Pibt::swap_possible(int32_t v_pusher, int32_t v_puller)
{
  const int32_t v_pusher_origin = v_pusher;
  int32_t tmp = kNoVertex;
  while (v_puller != v_pusher_origin) {  // avoid looping
    int n = ins_->grid.degree(v_puller);
    for (int32_t u : ins_->grid.neighbors(v_puller)) {
      const int a = occupant_now(u);
      if (u == v_pusher ||
          (ins_->grid.degree(u) == 1 && a != -1 && ins_->goals[a] == u)) {
        --n;
      } else {
        tmp = u;
      }
    }
    if (n >= 2) return true;
    if (n <= 0) return false;
    v_pusher = v_puller;
    v_puller = tmp;
  }
  return false;
}

bool Pibt::plan_agent(int agent, std::mt19937& rng)
{
  auto& buf = cand_[agent];
  sort_candidates(agent, rng, buf);
  const int swap_agent = swap_target(agent, buf.front());
  if (swap_agent != -1) {
    std::reverse(buf.begin(), buf.end());
    std::reverse(cand_f_[agent].begin(), cand_f_[agent].end());
  }

  const int32_t v_now = (*from_)[agent];
  for (int32_t u : buf) {
    if (occupant_next(u) != -1) continue;            // vertex conflict
    const int k = occupant_now(u);
    if (k != -1 && v_next_[k] == v_now) continue;    // swap conflict

    reserve_next(u, agent);
    v_next_[agent] = u;

    // priority inheritance: the displaced occupant plans immediately
    if (k != -1 && k != agent && v_next_[k] == -1 && !plan_agent(k, rng))
      continue;

    // pull the swap partner into the vacated cell
    if (swap_agent != -1 && v_next_[swap_agent] == -1 &&
        occupant_next(v_now) == -1) {
      reserve_next(v_now, swap_agent);
      v_next_[swap_agent] = v_now;
    }
    return true;
  }

  // dead end: stay put and report failure upward
  reserve_next(v_now, agent);
  v_next_[agent] = v_now;
  return false;
}

bool Pibt::step(const Config& from, const std::vector<uint16_t>& order,
                const PositionConstraint& constraint, std::mt19937& rng,
                Config& to, HistoryRecord* record)
{
  const int n = ins_->num_agents();
  assert(static_cast<int>(from.size()) == n);
  from_ = &from;
  ++generation_;
  for (int i = 0; i < n; ++i) {
    v_next_[i] = -1;
    now_stamp_[from[i]] = generation_;
    now_[from[i]] = i;
  }

  for (auto [agent, v] : constraint.pins) {
    if (occupant_next(v) != -1) return false;  // two pins on one vertex
    // pinned swap: the current occupant of v was already pinned to our cell
    const int occ = occupant_now(v);
    const int back = occupant_next(from[agent]);
    if (occ != -1 && back != -1 && occ == back) return false;
    v_next_[agent] = v;
    reserve_next(v, agent);
  }

  for (uint16_t i : order) {
    if (v_next_[i] == -1 && !plan_agent(i, rng)) return false;
  }

  to.resize(n);
  for (int i = 0; i < n; ++i) to[i] = v_next_[i];

  if (record != nullptr) {
    record->committed.resize(n);
    record->at_goal.resize(n);
    record->blocked.clear();
    for (int i = 0; i < n; ++i) {
      record->committed[i] = {from[i], to[i]};
      record->at_goal[i] = ins_->at_goal(i, from[i]) ? 1 : 0;
      if (cand_stamp_[i] == generation_) {
        // reuse the f-values computed while planning
        const auto& cs = cand_[i];
        const auto& fs = cand_f_[i];
        const size_t hit = std::find(cs.begin(), cs.end(), to[i]) - cs.begin();
        assert(hit < cs.size());
        for (size_t k = 0; k < cs.size(); ++k)
          if (fs[k] < fs[hit]) record->blocked.push_back({i, cs[k]});
      } else {
        // pinned or pulled agents never sorted their candidates
        const int64_t committed_f = eval_->dist(i, to[i]);
        if (eval_->dist(i, from[i]) < committed_f)
          record->blocked.push_back({i, from[i]});
        for (int32_t u : ins_->grid.neighbors(from[i]))
          if (eval_->dist(i, u) < committed_f) record->blocked.push_back({i, u});
      }
    }
  }
  return true;
}

std::optional<std::vector<int32_t>> Pibt::swap_assist(const Config& from,
                                                      int agent,
                                                      std::mt19937& rng)
{
  from_ = &from;
  ++generation_;
  for (size_t i = 0; i < from.size(); ++i) {
    v_next_[i] = -1;
    now_stamp_[from[i]] = generation_;
    now_[from[i]] = i;
  }
  auto& buf = cand_[agent];
  sort_candidates(agent, rng, buf);
  if (swap_target(agent, buf.front()) == -1) return std::nullopt;
  std::vector<int32_t> reversed(buf.rbegin(), buf.rend());
  return reversed;
}

}  // namespace mapf
