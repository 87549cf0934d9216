#include "cli.hpp"

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "instance.hpp"
#include "log.hpp"
#include "report.hpp"
#include "solver.hpp"
#include "traffic_map.hpp"

namespace mapf {

namespace {

std::ofstream open_output(const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write to " + path);
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args)
{
  CLI::App app{"anytime MAPF solver guided by a lightweight traffic map"};
  app.name("ltm_mapf");

  std::string map_path, scen_path, mode = "oneshot";
  std::string output_path, coverage_path, ltm_path, paths_path;
  int agents = 0;
  SolveConfig cfg;

  app.add_option("--map", map_path, "MovingAI .map file")->required();
  app.add_option("--scen", scen_path, "MovingAI .scen file")->required();
  app.add_option("--agents", agents, "number of agents")
      ->required()
      ->check(CLI::PositiveNumber);
  app.add_option("--mode", mode, "oneshot | pe")
      ->check(CLI::IsMember({"oneshot", "pe"}));
  app.add_option("--time-limit", cfg.time_limit_s,
                 "time limit in seconds (PE: overall wall cap)")
      ->check(CLI::PositiveNumber);
  app.add_option("--exec-time", cfg.exec_time_s, "PE: seconds per action")
      ->check(CLI::PositiveNumber);
  app.add_option("--commit", cfg.commit_horizon, "PE: actions per commitment")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-factor", cfg.budget_factor,
                 "node budget = factor x best makespan")
      ->check(CLI::Range(1.0, 1e9));
  app.add_option("--w-lb", cfg.w_lb, "traffic penalty lower bound");
  app.add_option("--w-ub", cfg.w_ub, "traffic penalty upper bound");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_flag("--disable-ltm", cfg.disable_ltm,
               "plain baseline: uniform guidance, no node budgets");
  app.add_option("--output", output_path, "write JSON report here");
  app.add_option("--coverage", coverage_path, "write coverage CSV here");
  app.add_option("--dump-ltm", ltm_path, "write traffic map CSV here");
  app.add_option("--paths", paths_path, "write per-agent paths here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ltm_mapf: " << e.what() << std::endl;
    return 2;
  }
  cfg.mode = mode == "pe" ? SolveMode::pe : SolveMode::oneshot;

  try {
    cfg.validate();
    const Instance ins = load_instance(map_path, scen_path, agents);
    LTM_LOG_INFO("loaded " << map_path << " (" << ins.grid.width() << "x"
                           << ins.grid.height() << "), " << agents << " agents");
    Solver solver(ins, cfg);

    RunReport report;
    report.map_path = map_path;
    report.scen_path = scen_path;
    report.agents = agents;
    report.cfg = cfg;
    report.ltm_dump_path = ltm_path;

    if (cfg.mode == SolveMode::oneshot) {
      auto res = solver.solve_oneshot();
      report.events = std::move(res.events);
      report.iterations = std::move(res.iterations);
      report.search_complete = res.search_complete;
      report.wall_ms = res.wall_ms;
      if (res.best) {
        report.solved = true;
        report.solution = std::move(*res.best);
      }
    } else {
      auto res = solver.solve_pe();
      report.events = std::move(res.events);
      report.iterations = std::move(res.iterations);
      report.windows = std::move(res.windows);
      report.wall_ms = res.wall_ms;
      report.solved = res.solved;
      report.solution = std::move(res.trace);
    }

    if (report.solved) {
      report.validated = validate_solution(ins, report.solution).ok;
      if (report.validated)
        report.metrics = compute_metrics(ins, report.solution);
      else
        LTM_LOG_INFO("validation failed on the returned solution");
    }

    if (!output_path.empty()) {
      auto out = open_output(output_path);
      out << report_to_json(report, ins.grid).dump(2) << '\n';
    }
    if (!coverage_path.empty()) {
      int64_t lb = 0;
      for (int i = 0; i < ins.num_agents(); ++i)
        lb += bfs_dist(ins.grid, ins.goals[i])[ins.starts[i]];
      auto out = open_output(coverage_path);
      write_coverage_csv(out, report.events, lb);
    }
    if (!ltm_path.empty()) {
      auto out = open_output(ltm_path);
      solver.traffic_map().dump_csv(out);
    }
    if (!paths_path.empty() && report.solved) {
      auto out = open_output(paths_path);
      write_paths(out, ins.grid, report.solution);
    }

    if (!report.solved) {
      std::cerr << "ltm_mapf: no solution within the budget" << std::endl;
      return 1;
    }
    if (!report.validated) {
      std::cerr << "ltm_mapf: returned solution failed validation" << std::endl;
      return 1;
    }
    std::cout << "solved: sum_of_loss=" << report.metrics.sum_of_loss
              << " ratio=" << report.metrics.sol_ratio
              << " makespan=" << report.metrics.makespan << std::endl;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "ltm_mapf: " << e.what() << std::endl;
    return 2;
  }
}

int run_cli(int argc, char** argv)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace mapf
