#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "pibt.hpp"
#include "solution.hpp"

using namespace mapf;

namespace {

// evaluation backed by plain BFS tables, for the uniform-map equivalence
struct BfsEval : DistEval {
  std::vector<std::vector<int32_t>> tables;
  explicit BfsEval(const Instance& ins)
  {
    for (int i = 0; i < ins.num_agents(); ++i)
      tables.push_back(bfs_dist(ins.grid, ins.goals[i]));
  }
  int64_t dist(int agent, int32_t v) override
  {
    const int32_t d = tables[agent][v];
    return d == kUnreachable ? kInfCost : int64_t{d} * kCostUnit;
  }
};

struct Rig {
  Instance ins;
  TrafficMap ltm;
  OracleEval eval;
  Pibt pibt;
  explicit Rig(Instance instance)
      : ins(std::move(instance)), ltm(ins.grid), eval(ltm, ins), pibt(ins, eval)
  {
  }
  std::vector<uint16_t> order()
  {
    return priority_order(root_priorities(ins, eval, ins.starts));
  }
};

}  // namespace

TEST_CASE("pibt: single agent descends greedily")
{
  Rig rig(test::make_instance_xy(test::corridor_grid(3), {{0, 0}}, {{2, 0}}));
  std::mt19937 rng(0);
  Config to;
  HistoryRecord rec;
  REQUIRE(rig.pibt.step(rig.ins.starts, rig.order(), {}, rng, to, &rec));
  CHECK(to == Config{1});
  CHECK(rec.committed[0].from == 0);
  CHECK(rec.committed[0].to == 1);
  CHECK(rec.blocked.empty());
  CHECK(rec.at_goal[0] == 0);
}

TEST_CASE("pibt: priority inheritance pushes a finished agent onward")
{
  // corridor 0-1-2: a0 at 0 heading to 2, a1 parked at its goal 1
  Rig rig(test::make_instance_xy(test::corridor_grid(3), {{0, 0}, {1, 0}},
                                 {{2, 0}, {1, 0}}));
  const auto order = rig.order();
  REQUIRE(order == std::vector<uint16_t>{0, 1});  // farther agent first

  std::mt19937 rng(0);
  Config to;
  HistoryRecord rec;
  REQUIRE(rig.pibt.step(rig.ins.starts, order, {}, rng, to, &rec));
  CHECK(to == Config{1, 2});

  // the pushed agent records its blocked wait and its goal flag
  REQUIRE(rec.blocked.size() == 1);
  CHECK(rec.blocked[0].agent == 1);
  CHECK(rec.blocked[0].to == 1);
  CHECK(rec.at_goal[1] == 1);
  CHECK(rec.at_goal[0] == 0);

  // applying the record: both committed moves count, the blocked goal-wait
  // does not
  rig.ltm.apply_history(std::span(&rec, 1));
  CHECK(rig.ltm.raw(rig.ins.grid.edge_index(0, 1)) == 1);
  CHECK(rig.ltm.raw(rig.ins.grid.edge_index(1, 2)) == 1);
  CHECK(rig.ltm.raw(rig.ins.grid.edge_index(1, 0)) == 0);
  CHECK(rig.ltm.raw(rig.ins.grid.edge_index(2, 1)) == 0);
}

TEST_CASE("pibt: constraints pin an agent in place")
{
  Rig rig(test::make_instance_xy(test::corridor_grid(3), {{0, 0}}, {{2, 0}}));
  std::mt19937 rng(0);
  Config to;
  HistoryRecord rec;
  PositionConstraint pin;
  pin.pins.emplace_back(0, 0);  // forced wait at the start
  REQUIRE(rig.pibt.step(rig.ins.starts, rig.order(), pin, rng, to, &rec));
  CHECK(to == Config{0});
  CHECK(rec.committed[0].to == 0);
  CHECK(rec.at_goal[0] == 0);
  REQUIRE(rec.blocked.size() == 1);  // the better move 0->1 was blocked
  CHECK(rec.blocked[0].to == 1);
}

TEST_CASE("pibt: conflicting pins fail without records")
{
  Rig rig(test::make_instance_xy(test::corridor_grid(4), {{0, 0}, {2, 0}},
                                 {{3, 0}, {0, 0}}));
  std::mt19937 rng(0);
  Config to;
  PositionConstraint pins;
  pins.pins.emplace_back(0, 1);
  pins.pins.emplace_back(1, 1);  // same vertex: infeasible
  CHECK_FALSE(rig.pibt.step(rig.ins.starts, rig.order(), pins, rng, to, nullptr));
}

TEST_CASE("swap assist: no pattern on an open grid")
{
  Grid g(3, 3, std::vector<uint8_t>(9, 1));
  Rig rig(test::make_instance_xy(std::move(g), {{0, 0}, {2, 2}},
                                 {{2, 0}, {0, 2}}));
  std::mt19937 rng(0);
  CHECK_FALSE(rig.pibt.swap_assist(rig.ins.starts, 0, rng).has_value());
}

TEST_CASE("swap assist: single agent never needs it")
{
  Rig rig(test::make_instance_xy(test::corridor_grid(3), {{0, 0}}, {{2, 0}}));
  std::mt19937 rng(0);
  CHECK_FALSE(rig.pibt.swap_assist(rig.ins.starts, 0, rng).has_value());
}

TEST_CASE("swap assist: head-on corridor meeting reverses toward the pocket")
{
  // corridor row with a pocket below (1,0); agents must exchange
  Grid g = Grid::parse_map("type octile\nheight 2\nwidth 4\nmap\n....\n@.@@\n");
  Rig rig(test::make_instance_xy(std::move(g), {{1, 0}, {2, 0}},
                                 {{3, 0}, {0, 0}}));
  std::mt19937 rng(0);
  const auto reversed = rig.pibt.swap_assist(rig.ins.starts, 0, rng);
  REQUIRE(reversed.has_value());
  // retreat first (a detour cell), the head-on move last
  CHECK(reversed->back() == rig.ins.grid.vertex_at(2, 0));
  const int32_t first = reversed->front();
  CHECK((first == rig.ins.grid.vertex_at(1, 1) ||
         first == rig.ins.grid.vertex_at(0, 0)));
}

TEST_CASE("pibt: transitions always validate, records are complete")
{
  std::mt19937 seed_rng(41);
  for (int it = 0; it < 15; ++it) {
    Rig rig(test::random_instance(seed_rng, 6, 6, 0.2, 4));
    std::mt19937 rng(it);
    Config cur = rig.ins.starts;
    auto prio = root_priorities(rig.ins, rig.eval, cur);
    for (int step = 0; step < 30; ++step) {
      Config to;
      HistoryRecord rec;
      REQUIRE(rig.pibt.step(cur, priority_order(prio), {}, rng, to, &rec));

      REQUIRE(rec.committed.size() == static_cast<size_t>(rig.ins.num_agents()));
      for (int i = 0; i < rig.ins.num_agents(); ++i) {
        CHECK(rec.committed[i].from == cur[i]);
        CHECK(rec.committed[i].to == to[i]);
        if (cur[i] != to[i])
          CHECK(rig.ins.grid.edge_index(cur[i], to[i]) != kNoVertex);
      }
      // no vertex conflicts, no swaps
      for (int i = 0; i < rig.ins.num_agents(); ++i)
        for (int j = i + 1; j < rig.ins.num_agents(); ++j) {
          CHECK(to[i] != to[j]);
          CHECK(!(to[i] == cur[j] && to[j] == cur[i]));
        }
      // every blocked entry strictly improves on the committed move
      for (const auto& b : rec.blocked)
        CHECK(rig.eval.dist(b.agent, b.to) <
              rig.eval.dist(b.agent, rec.committed[b.agent].to));
      prio = inherit_priorities(prio, rig.ins, to);
      cur = to;
    }
  }
}

TEST_CASE("priorities gain one unit per step away from goal, reset on arrival")
{
  Rig rig(test::make_instance_xy(test::corridor_grid(4), {{0, 0}, {3, 0}},
                                 {{2, 0}, {3, 0}}));
  auto prio = root_priorities(rig.ins, rig.eval, rig.ins.starts);
  REQUIRE(prio[1] == 0.0f);  // already home
  const float base0 = prio[0];
  CHECK(base0 > 0.0f);
  CHECK(base0 < 1.0f);

  auto next = inherit_priorities(prio, rig.ins, {1, 3});  // a0 still traveling
  CHECK(next[0] == base0 + 1.0f);
  CHECK(next[1] == 0.0f);
  next = inherit_priorities(next, rig.ins, {2, 3});  // a0 arrives
  // back to its base fraction (to float precision)
  CHECK(next[0] == doctest::Approx(base0).epsilon(1e-6));
  CHECK(next[0] < 1.0f);
}

TEST_CASE("pibt: deterministic under a fixed seed")
{
  std::mt19937 seed_rng(77);
  Rig a(test::random_instance(seed_rng, 6, 6, 0.15, 5));
  std::mt19937 seed_rng2(77);
  Rig b(test::random_instance(seed_rng2, 6, 6, 0.15, 5));

  std::mt19937 rng_a(9), rng_b(9);
  Config cur_a = a.ins.starts, cur_b = b.ins.starts;
  for (int step = 0; step < 25; ++step) {
    Config to_a, to_b;
    REQUIRE(a.pibt.step(cur_a, a.order(), {}, rng_a, to_a, nullptr));
    REQUIRE(b.pibt.step(cur_b, b.order(), {}, rng_b, to_b, nullptr));
    CHECK(to_a == to_b);
    cur_a = to_a;
    cur_b = to_b;
  }
}

TEST_CASE("pibt: uniform traffic map matches BFS-driven behavior")
{
  std::mt19937 seed_rng(101);
  for (int it = 0; it < 10; ++it) {
    Rig rig(test::random_instance(seed_rng, 7, 5, 0.2, 4));
    BfsEval bfs_eval(rig.ins);
    Pibt bfs_pibt(rig.ins, bfs_eval);

    std::mt19937 rng_a(it), rng_b(it);
    Config cur = rig.ins.starts;
    auto prio = root_priorities(rig.ins, rig.eval, cur);
    REQUIRE(prio == root_priorities(rig.ins, bfs_eval, cur));
    for (int step = 0; step < 20; ++step) {
      Config to_a, to_b;
      REQUIRE(rig.pibt.step(cur, priority_order(prio), {}, rng_a, to_a, nullptr));
      REQUIRE(bfs_pibt.step(cur, priority_order(prio), {}, rng_b, to_b, nullptr));
      REQUIRE(to_a == to_b);
      prio = inherit_priorities(prio, rig.ins, to_a);
      cur = to_a;
    }
  }
}
