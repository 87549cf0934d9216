#include "solver.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "log.hpp"

namespace mapf {

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Clock::time_point after_seconds(Clock::time_point t0, double s)
{
  return t0 + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(s));
}

}  // namespace

void SolveConfig::validate() const
{
  if (mode == SolveMode::oneshot && !(time_limit_s > 0))
    throw std::runtime_error("time limit must be positive");
  if (mode == SolveMode::pe) {
    if (!(exec_time_s > 0)) throw std::runtime_error("exec time must be positive");
    if (commit_horizon < 1)
      throw std::runtime_error("commit horizon must be at least 1");
    if (!(time_limit_s > 0))
      throw std::runtime_error("time limit (wall cap) must be positive");
  }
  if (!(budget_factor >= 1))
    throw std::runtime_error("budget factor must be at least 1");
  if (!(w_lb >= 0) || !(w_lb < w_ub))
    throw std::runtime_error("weight bounds must satisfy 0 <= w_lb < w_ub");
}

Solver::Solver(const Instance& ins, const SolveConfig& cfg)
    : ins_(&ins),
      cfg_(cfg),
      ltm_(ins.grid, cfg.w_lb, cfg.w_ub),
      eval_(ltm_, ins),
      pibt_(ins, eval_),
      tree_(ins),
      rng_(static_cast<std::mt19937::result_type>(cfg.seed))
{
  cfg.validate();
}

HighLevelNode* Solver::select_restart_node(SolveMode mode, const Config* current)
{
  HighLevelNode* node = nullptr;
  if (mode == SolveMode::oneshot) {
    node = tree_.root();
  } else {
    if (current == nullptr || (node = tree_.find(*current)) == nullptr)
      throw std::runtime_error(
          "select_restart_node: current configuration is not in the tree");
  }
  node->priorities = root_priorities(*ins_, eval_, node->config);
  node->order.clear();  // recomputed from the refreshed priorities
  tree_.open.clear();
  tree_.open.push_back(node);
  return node;
}

bool Solver::seed_stack(HighLevelNode* home, int64_t best_cost, bool subtree_only,
                        bool prefer_resume)
{
  if (prefer_resume && !tree_.open.empty()) return true;
  if (!prefer_resume && !home->cursor.empty()) {
    home->priorities = root_priorities(*ins_, eval_, home->config);
    home->order.clear();
    tree_.open.assign(1, home);
    return true;
  }
  if (!tree_.open.empty()) return true;  // resume where the last run stopped
  auto candidates =
      tree_.viable_unexhausted(best_cost, subtree_only ? home : nullptr);
  if (candidates.empty()) return false;
  tree_.open = std::move(candidates);  // newest nodes end up on top
  return true;
}

uint64_t Solver::iteration_budget(int64_t incumbent_makespan) const
{
  if (cfg_.disable_ltm || incumbent_makespan < 0) return 0;
  const auto b = llround(cfg_.budget_factor * incumbent_makespan);
  return b < 1 ? 1 : static_cast<uint64_t>(b);
}

void Solver::absorb_history(std::vector<HistoryRecord>&& records,
                            std::vector<HistoryRecord>* retained)
{
  if (cfg_.disable_ltm || records.empty()) return;
  ltm_.apply_history(records);
  eval_.rebind();
  if (retained != nullptr)
    std::move(records.begin(), records.end(), std::back_inserter(*retained));
}

OneshotResult Solver::solve_oneshot()
{
  const auto t0 = Clock::now();
  const auto deadline = after_seconds(t0, cfg_.time_limit_s);
  OneshotResult out;
  HighLevelNode* root = tree_.root();

  // experimental strategy: restart near the goal end of the incumbent path
  auto pick_home = [&]() -> HighLevelNode* {
    if (cfg_.restart != RestartStrategy::near_goal || !tree_.goal_node() ||
        !out.best)
      return root;
    for (HighLevelNode* p = tree_.goal_node()->parent; p != nullptr;
         p = p->parent) {
      if (!p->cursor.empty() && p->g + p->h < out.best_cost) return p;
      if (p == root) break;
    }
    return root;
  };

  int iteration = 0;
  while (Clock::now() < deadline) {
    // the plain baseline continues its depth-first state after iteration 1
    // instead of restarting at the root
    const bool plain_continue = cfg_.disable_ltm && iteration >= 1;
    if (!seed_stack(pick_home(), out.best_cost, false, plain_continue)) {
      out.search_complete = true;  // nothing viable left: incumbent is optimal
      break;
    }
    ++iteration;
    RunLimits limits;
    limits.budget = iteration_budget(
        out.best ? static_cast<int64_t>(out.best->size()) - 1 : -1);
    limits.best_sol_cost = out.best_cost;
    limits.deadline = deadline;
    limits.has_deadline = true;
    limits.skip_dominated = plain_continue;

    const double run_start = ms_since(t0);
    auto run = lacam_run(tree_, pibt_, eval_, rng_, root, nullptr, limits);
    out.iterations.push_back({iteration, limits.budget, run.reason,
                              run.hl_generated, run.ll_generated,
                              ms_since(t0) - run_start});
    LTM_LOG_DEBUG("run " << iteration << ": " << to_string(run.reason) << ", "
                         << run.hl_generated << "+" << run.ll_generated
                         << " generations, " << tree_.num_nodes() << " nodes");
    absorb_history(std::move(run.records), nullptr);

    if (run.solution && (out.best_cost < 0 || run.solution_cost < out.best_cost)) {
      out.best = std::move(run.solution);
      out.best_cost = run.solution_cost;
      if (!out.first_solution) out.first_solution = out.best;
      out.events.push_back({ms_since(t0), out.best_cost, iteration});
      LTM_LOG_INFO("iteration " << iteration << ": cost " << out.best_cost
                                << " (" << to_string(run.reason) << ")");
      if (out.best_cost <= tree_.h_of(root->config)) {
        out.search_complete = true;  // matches the admissible bound
        break;
      }
    }
    if (run.reason == RunReason::deadline) break;
  }
  out.wall_ms = ms_since(t0);
  return out;
}

PeResult Solver::solve_pe()
{
  const auto t0 = Clock::now();
  const auto wall_cap = after_seconds(t0, cfg_.time_limit_s);
  const int X = cfg_.commit_horizon;

  PeResult out;
  out.trace.push_back(ins_->starts);
  HighLevelNode* n_cur = tree_.root();
  int iteration = 0;
  bool resume_paused = false;

  auto incumbent = [&]() -> HighLevelNode* {
    HighLevelNode* goal = tree_.goal_node();
    if (goal == nullptr) return nullptr;
    assert(tree_.in_subtree(goal, n_cur));
    return goal;
  };
  auto full_makespan = [&](HighLevelNode* goal) -> int64_t {
    int64_t remaining = 0;
    for (const HighLevelNode* p = goal; p != n_cur; p = p->parent) ++remaining;
    return static_cast<int64_t>(out.trace.size()) - 1 + remaining;
  };

  int window = 0;
  while (out.trace.back() != ins_->goals) {
    if (Clock::now() >= wall_cap) break;  // unsolved within the wall cap
    ++window;
    const auto window_deadline =
        after_seconds(Clock::now(), cfg_.exec_time_s * X);
    std::optional<uint64_t> pool;
    if (window == 1 && cfg_.first_window_budget) pool = *cfg_.first_window_budget;

    int runs = 0;
    const double window_start = ms_since(t0);
    while (Clock::now() < window_deadline) {
      if (pool && *pool == 0) {
        std::this_thread::sleep_until(window_deadline);
        break;
      }
      HighLevelNode* goal = incumbent();
      const int64_t best_cost = goal ? goal->g : -1;
      if (best_cost >= 0 && n_cur->g + n_cur->h >= best_cost) {
        // remaining plan already matches the admissible bound
        std::this_thread::sleep_until(window_deadline);
        break;
      }
      // a paused search resumes instead of restarting at the commit node
      if (!seed_stack(n_cur, best_cost, true, resume_paused)) {
        std::this_thread::sleep_until(window_deadline);
        break;  // subtree fully explored for the incumbent
      }
      resume_paused = false;
      ++iteration;
      ++runs;
      RunLimits limits;
      limits.budget = iteration_budget(goal ? full_makespan(goal) : -1);
      if (pool && (limits.budget == 0 || *pool < limits.budget))
        limits.budget = std::max<uint64_t>(*pool, 1);
      limits.best_sol_cost = best_cost;
      limits.deadline = window_deadline;
      limits.has_deadline = true;

      const double run_start = ms_since(t0);
      auto run = lacam_run(tree_, pibt_, eval_, rng_, n_cur, n_cur, limits);
      out.iterations.push_back({iteration, limits.budget, run.reason,
                                run.hl_generated, run.ll_generated,
                                ms_since(t0) - run_start});
      if (pool) *pool -= std::min(*pool, run.hl_generated + run.ll_generated);
      absorb_history(std::move(run.records), &out.retained_records);

      HighLevelNode* after = tree_.goal_node();
      if (after != nullptr && (best_cost < 0 || after->g < best_cost)) {
        out.events.push_back({ms_since(t0), after->g, iteration});
        LTM_LOG_INFO("window " << window << ": cost " << after->g);
      }
      if (run.reason == RunReason::deadline) {
        resume_paused = true;
        break;
      }
    }

    // commit X actions: the plan's next steps if one exists, else waits
    HighLevelNode* goal = incumbent();
    if (goal != nullptr) {
      const auto path = extract_plan(goal, n_cur);
      const int take = std::min<int>(X, static_cast<int>(path.size()) - 1);
      for (int k = 1; k <= take; ++k) out.trace.push_back(path[k]);
      for (int k = take; k < X; ++k) out.trace.push_back(ins_->goals);
      HighLevelNode* advanced = tree_.find(path[take]);
      assert(advanced != nullptr);
      if (advanced != n_cur) {
        // drop guidance history gathered outside the new subtree
        std::vector<HistoryRecord> kept, dropped;
        for (auto& rec : out.retained_records) {
          if (tree_.in_subtree(tree_.node_by_id(rec.node_id), advanced))
            kept.push_back(std::move(rec));
          else
            dropped.push_back(std::move(rec));
        }
        if (!dropped.empty()) {
          ltm_.remove_history(dropped);
          eval_.rebind();
        }
        out.retained_records = std::move(kept);
        n_cur = advanced;
        // stale stack entries outside the new subtree must not be expanded
        std::erase_if(tree_.open, [&](HighLevelNode* h) {
          return !tree_.in_subtree(h, n_cur);
        });
      }
      resume_paused = false;
      out.windows.push_back({window, true, out.trace.size(),
                             solution_hash(ins_->grid, out.trace), runs,
                             goal->g, ms_since(t0) - window_start});
    } else {
      for (int k = 0; k < X; ++k) out.trace.push_back(out.trace.back());
      out.windows.push_back({window, false, out.trace.size(),
                             solution_hash(ins_->grid, out.trace), runs, -1,
                             ms_since(t0) - window_start});
      LTM_LOG_DEBUG("window " << window << ": no plan yet, committed " << X
                              << " waits");
    }
  }

  out.solved = out.trace.back() == ins_->goals;
  out.ltm_raw_final = ltm_.raw_counts();
  out.wall_ms = ms_since(t0);
  return out;
}

}  // namespace mapf
