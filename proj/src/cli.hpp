/*
 * command-line entry point (library side, so tests can drive it in-process)
 */
#pragma once

#include <string>
#include <vector>

namespace mapf {

// exit status: 0 validated solve, 1 unsolved within budget, 2 input error
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace mapf
