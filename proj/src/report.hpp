/*
 * machine-readable run reports: JSON report, coverage CSV, paths file
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "solution.hpp"
#include "solver.hpp"

namespace mapf {

constexpr int kReportSchemaVersion = 1;

struct RunReport {
  std::string map_path;
  std::string scen_path;
  int agents = 0;
  SolveConfig cfg;
  bool solved = false;
  bool validated = false;
  Metrics metrics;  // meaningful when solved
  std::vector<AnytimeEvent> events;
  std::vector<IterationStat> iterations;
  std::vector<WindowStat> windows;  // PE mode only
  Solution solution;                // best plan / committed trace
  bool search_complete = false;
  double wall_ms = 0.0;
  std::string ltm_dump_path;  // empty if not requested
};

nlohmann::ordered_json report_to_json(const RunReport& report, const Grid& grid);

// rows: time_ms,best_sol,sol_ratio
void write_coverage_csv(std::ostream& out, const std::vector<AnytimeEvent>& events,
                        int64_t lower_bound);

// one line per agent: (x,y),(x,y),... per timestep
void write_paths(std::ostream& out, const Grid& grid, const Solution& sol);
Solution parse_paths(std::istream& in, const Grid& grid);

}  // namespace mapf
