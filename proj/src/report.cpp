#include "report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lacam.hpp"

namespace mapf {

using nlohmann::ordered_json;

ordered_json report_to_json(const RunReport& r, const Grid& grid)
{
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["instance"] = {{"map", r.map_path}, {"scen", r.scen_path}, {"agents", r.agents}};
  j["mode"] = r.cfg.mode == SolveMode::oneshot ? "oneshot" : "pe";
  j["params"] = {
      {"time_limit", r.cfg.time_limit_s}, {"exec_time", r.cfg.exec_time_s},
      {"commit", r.cfg.commit_horizon},   {"budget_factor", r.cfg.budget_factor},
      {"w_lb", r.cfg.w_lb},               {"w_ub", r.cfg.w_ub},
      {"disable_ltm", r.cfg.disable_ltm},
  };
  j["seed"] = r.cfg.seed;
  j["solved"] = r.solved;
  j["validated"] = r.validated;
  j["search_complete"] = r.search_complete;
  if (r.solved) {
    j["metrics"] = {{"sum_of_loss", r.metrics.sum_of_loss},
                    {"lower_bound", r.metrics.lower_bound},
                    {"sol_ratio", r.metrics.sol_ratio},
                    {"makespan", r.metrics.makespan}};
  } else {
    j["metrics"] = nullptr;
  }
  j["events"] = ordered_json::array();
  for (const auto& e : r.events)
    j["events"].push_back({{"time_ms", e.time_ms},
                           {"sum_of_loss", e.sum_of_loss},
                           {"iteration", e.iteration}});
  j["iterations"] = ordered_json::array();
  for (const auto& it : r.iterations)
    j["iterations"].push_back({{"iteration", it.iteration},
                               {"budget", it.budget},
                               {"reason", to_string(it.reason)},
                               {"hl_generations", it.hl_generated},
                               {"ll_generations", it.ll_generated},
                               {"time_ms", it.time_ms}});
  if (r.cfg.mode == SolveMode::pe) {
    j["windows"] = ordered_json::array();
    for (const auto& w : r.windows)
      j["windows"].push_back({{"window", w.window},
                              {"committed_plan", w.committed_plan},
                              {"trace_len", w.trace_len_after},
                              {"prefix_hash", w.prefix_hash},
                              {"runs", w.runs},
                              {"incumbent_cost", w.incumbent_cost},
                              {"time_ms", w.time_ms}});
  }
  // agent-major paths, mirroring the paths file
  j["paths"] = ordered_json::array();
  if (!r.solution.empty()) {
    for (size_t i = 0; i < r.solution.front().size(); ++i) {
      ordered_json path = ordered_json::array();
      for (const auto& q : r.solution)
        path.push_back({grid.x_of(q[i]), grid.y_of(q[i])});
      j["paths"].push_back(std::move(path));
    }
  }
  j["ltm_dump"] = r.ltm_dump_path.empty() ? ordered_json(nullptr)
                                          : ordered_json(r.ltm_dump_path);
  j["wall_clock_ms"] = r.wall_ms;
  return j;
}

void write_coverage_csv(std::ostream& out, const std::vector<AnytimeEvent>& events,
                        int64_t lower_bound)
{
  out << "time_ms,best_sol,sol_ratio\n";
  char buf[96];
  for (const auto& e : events) {
    const double ratio =
        lower_bound == 0 ? 1.0
                         : static_cast<double>(e.sum_of_loss) / lower_bound;
    snprintf(buf, sizeof buf, "%.3f,%lld,%.6f", e.time_ms,
             static_cast<long long>(e.sum_of_loss), ratio);
    out << buf << '\n';
  }
}

void write_paths(std::ostream& out, const Grid& grid, const Solution& sol)
{
  if (sol.empty()) return;
  const size_t n = sol.front().size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t t = 0; t < sol.size(); ++t) {
      if (t > 0) out << ',';
      out << '(' << grid.x_of(sol[t][i]) << ',' << grid.y_of(sol[t][i]) << ')';
    }
    out << '\n';
  }
}

Solution parse_paths(std::istream& in, const Grid& grid)
{
  std::vector<std::vector<int32_t>> agent_paths;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;
    std::vector<int32_t> path;
    const char* p = line.c_str();
    int x, y, consumed;
    while (*p != '\0') {
      if (*p == ',') ++p;
      if (sscanf(p, "(%d,%d)%n", &x, &y, &consumed) != 2)
        throw std::runtime_error("paths parse error at line " +
                                 std::to_string(line_no));
      const int32_t v = grid.vertex_at(x, y);
      if (v == kNoVertex)
        throw std::runtime_error("paths parse error at line " +
                                 std::to_string(line_no) +
                                 ": cell is blocked or out of bounds");
      path.push_back(v);
      p += consumed;
    }
    agent_paths.push_back(std::move(path));
  }
  if (agent_paths.empty()) throw std::runtime_error("paths file is empty");
  const size_t T = agent_paths.front().size();
  for (const auto& p : agent_paths)
    if (p.size() != T)
      throw std::runtime_error("paths file: agents have unequal path lengths");
  Solution sol(T, Config(agent_paths.size()));
  for (size_t i = 0; i < agent_paths.size(); ++i)
    for (size_t t = 0; t < T; ++t) sol[t][i] = agent_paths[i][t];
  return sol;
}

}  // namespace mapf
