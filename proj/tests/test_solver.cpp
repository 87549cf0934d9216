#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "solver.hpp"

using namespace mapf;

namespace {

SolveConfig oneshot_cfg(double limit_s, uint64_t seed = 0)
{
  SolveConfig cfg;
  cfg.mode = SolveMode::oneshot;
  cfg.time_limit_s = limit_s;
  cfg.seed = seed;
  return cfg;
}

SolveConfig pe_cfg(double exec_s, int commit, uint64_t seed = 0)
{
  SolveConfig cfg;
  cfg.mode = SolveMode::pe;
  cfg.exec_time_s = exec_s;
  cfg.commit_horizon = commit;
  cfg.time_limit_s = 60.0;  // wall cap
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("solve_oneshot: all agents already home")
{
  auto ins = test::make_instance_xy(test::corridor_grid(3), {{0, 0}, {2, 0}},
                                    {{0, 0}, {2, 0}});
  Solver solver(ins, oneshot_cfg(5.0));
  const auto res = solver.solve_oneshot();
  REQUIRE(res.best.has_value());
  CHECK(res.best->size() == 1);
  CHECK(res.best_cost == 0);
  CHECK(res.search_complete);
  REQUIRE(res.events.size() == 1);
  CHECK(res.events[0].iteration == 1);
}

TEST_CASE("solve_oneshot: reaches the brute-force optimum on a 4x4 pair")
{
  std::mt19937 seed_rng(5);
  auto ins = test::random_instance(seed_rng, 4, 4, 0.1, 2);
  const auto optimal = test::optimal_sum_of_loss(ins);
  Solver solver(ins, oneshot_cfg(30.0));
  const auto res = solver.solve_oneshot();
  REQUIRE(res.best.has_value());
  CHECK(validate_solution(ins, *res.best).ok);
  CHECK(res.best_cost == optimal);
}

TEST_CASE("solve_oneshot: event costs strictly decrease and solutions validate")
{
  std::mt19937 seed_rng(8);
  for (int it = 0; it < 5; ++it) {
    auto ins = test::random_instance(seed_rng, 6, 6, 0.15, 3);
    Solver solver(ins, oneshot_cfg(3.0, it));
    const auto res = solver.solve_oneshot();
    REQUIRE(res.best.has_value());
    CHECK(validate_solution(ins, *res.best).ok);
    const auto m = compute_metrics(ins, *res.best);
    CHECK(m.sum_of_loss == res.best_cost);
    CHECK(m.sum_of_loss >= m.lower_bound);
    for (size_t k = 1; k < res.events.size(); ++k) {
      CHECK(res.events[k].sum_of_loss < res.events[k - 1].sum_of_loss);
      CHECK(res.events[k].time_ms >= res.events[k - 1].time_ms);
    }
  }
}

TEST_CASE("first iteration is identical with and without guidance updates")
{
  std::mt19937 seed_rng(21);
  for (int it = 0; it < 4; ++it) {
    auto ins = test::random_instance(seed_rng, 8, 8, 0.2, 6);
    auto cfg = oneshot_cfg(5.0, 42 + it);
    Solver with_ltm(ins, cfg);
    cfg.disable_ltm = true;
    Solver baseline(ins, cfg);
    const auto a = with_ltm.solve_oneshot();
    const auto b = baseline.solve_oneshot();
    REQUIRE(a.first_solution.has_value());
    REQUIRE(b.first_solution.has_value());
    CHECK(*a.first_solution == *b.first_solution);
  }
}

TEST_CASE("select_restart_node: root in one-shot mode, stale PE configs throw")
{
  auto ins = test::make_instance_xy(test::corridor_grid(3), {{0, 0}}, {{2, 0}});
  Solver solver(ins, oneshot_cfg(1.0));
  CHECK(solver.select_restart_node(SolveMode::oneshot, nullptr) ==
        solver.tree().root());
  CHECK(solver.tree().open == std::vector{solver.tree().root()});
  const Config nowhere{1};
  CHECK_THROWS_WITH_AS(solver.select_restart_node(SolveMode::pe, &nowhere),
                       doctest::Contains("not in the tree"), std::runtime_error);
  CHECK(solver.select_restart_node(SolveMode::pe, &ins.starts) ==
        solver.tree().root());
}

TEST_CASE("solve_pe: trivial instance commits nothing")
{
  auto ins = test::make_instance_xy(test::corridor_grid(3), {{0, 0}, {2, 0}},
                                    {{0, 0}, {2, 0}});
  Solver solver(ins, pe_cfg(0.05, 5));
  const auto res = solver.solve_pe();
  CHECK(res.solved);
  CHECK(res.trace.size() == 1);
  CHECK(res.windows.empty());
}

TEST_CASE("solve_pe: corridor solved in the first window with goal-wait pads")
{
  auto ins = test::make_instance_xy(test::corridor_grid(3), {{0, 0}}, {{2, 0}});
  Solver solver(ins, pe_cfg(0.1, 5));
  const auto res = solver.solve_pe();
  REQUIRE(res.solved);
  REQUIRE(res.windows.size() == 1);
  CHECK(res.windows[0].committed_plan);
  // 2 moves plus 3 pads
  CHECK(res.trace == Solution{{0}, {1}, {2}, {2}, {2}, {2}});
  CHECK(validate_solution(ins, res.trace).ok);
  CHECK(compute_metrics(ins, res.trace).sum_of_loss == 2);
}

TEST_CASE("solve_pe: starved first window commits waits, then recovers")
{
  auto ins = test::make_instance_xy(test::corridor_grid(4), {{0, 0}}, {{3, 0}});
  auto cfg = pe_cfg(0.05, 5);
  cfg.first_window_budget = 1;
  Solver solver(ins, cfg);
  const auto res = solver.solve_pe();
  REQUIRE(res.solved);
  REQUIRE(res.windows.size() >= 2);
  CHECK_FALSE(res.windows[0].committed_plan);
  for (int t = 1; t <= 5; ++t) CHECK(res.trace[t] == ins.starts);  // X waits
  CHECK(validate_solution(ins, res.trace).ok);
  // 5 wasted wait steps plus the 3-step walk
  CHECK(compute_metrics(ins, res.trace).sum_of_loss == 8);
}

TEST_CASE("solve_pe: committed prefixes never mutate and guidance stays clean")
{
  std::mt19937 seed_rng(31);
  auto ins = test::random_instance(seed_rng, 8, 8, 0.15, 8);
  Solver solver(ins, pe_cfg(0.02, 3, 9));
  const auto res = solver.solve_pe();
  REQUIRE(res.solved);
  CHECK(validate_solution(ins, res.trace).ok);
  CHECK(res.trace.size() == 1 + res.windows.size() * 3);

  for (const auto& w : res.windows) {
    const Solution prefix(res.trace.begin(),
                          res.trace.begin() + static_cast<long>(w.trace_len_after));
    CHECK(solution_hash(ins.grid, prefix) == w.prefix_hash);
  }

  // raw counters equal exactly the increments of the retained records
  TrafficMap expect(ins.grid);
  if (!res.retained_records.empty()) expect.apply_history(res.retained_records);
  CHECK(expect.raw_counts() == res.ltm_raw_final);
}

TEST_CASE("solve_pe: multiple horizons terminate with all agents home")
{
  std::mt19937 seed_rng(47);
  auto ins = test::random_instance(seed_rng, 6, 6, 0.1, 5);
  for (int X : {5, 10}) {
    Solver solver(ins, pe_cfg(0.02, X, X));
    const auto res = solver.solve_pe();
    REQUIRE(res.solved);
    CHECK(res.trace.back() == ins.goals);
    CHECK(validate_solution(ins, res.trace).ok);
    CHECK((res.trace.size() - 1) % X == 0);
  }
}

TEST_CASE("solve_pe: unsolvable instances stop at the wall cap with failure")
{
  // two agents must swap inside a dead-end corridor
  auto ins = test::make_instance_xy(test::corridor_grid(2), {{0, 0}, {1, 0}},
                                    {{1, 0}, {0, 0}});
  auto cfg = pe_cfg(0.05, 5);
  cfg.time_limit_s = 1.5;  // wall cap
  Solver solver(ins, cfg);
  const auto res = solver.solve_pe();
  CHECK_FALSE(res.solved);
  CHECK(res.trace.back() != ins.goals);
  for (const auto& w : res.windows) CHECK_FALSE(w.committed_plan);  // all waits
}

TEST_CASE("solve_oneshot: desk-scale instances reach the oracle optimum")
{
  std::mt19937 seed_rng(61);
  for (int it = 0; it < 6; ++it) {
    auto ins = test::random_instance(seed_rng, 5, 5, 0.15, 1 + it % 3);
    const auto optimal = test::optimal_sum_of_loss(ins);
    Solver solver(ins, oneshot_cfg(30.0, it));
    const auto res = solver.solve_oneshot();
    REQUIRE(res.best.has_value());
    CHECK(res.best_cost == optimal);
  }
}

TEST_CASE("config validation names the offending field")
{
  SolveConfig cfg;
  cfg.time_limit_s = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("time limit"),
                       std::runtime_error);
  cfg = SolveConfig{};
  cfg.mode = SolveMode::pe;
  cfg.commit_horizon = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("commit"),
                       std::runtime_error);
  cfg = SolveConfig{};
  cfg.w_ub = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("bounds"),
                       std::runtime_error);
}
