/*
 * deterministic fixtures: corridors, random grids and instances, temp files
 */
#pragma once

#include <random>
#include <string>
#include <vector>

#include "instance.hpp"
#include "solution.hpp"

namespace mapf::test {

// open 1 x length corridor; vertex id equals x
Grid corridor_grid(int length);

// random grid with ~block_prob blocked cells; border stays as drawn
Grid random_grid(std::mt19937& rng, int width, int height, double block_prob);

// n agents with distinct starts/goals sampled from the largest connected
// component; retries internally until the component is big enough
Instance random_instance(std::mt19937& rng, int width, int height,
                         double block_prob, int n);

Instance make_instance_xy(Grid grid,
                          const std::vector<std::pair<int, int>>& starts,
                          const std::vector<std::pair<int, int>>& goals);

// MovingAI scenario text for the given instance
std::string scen_text(const Instance& ins, const std::string& map_name);

// writes contents into a unique temp file, returns its path
std::string write_temp_file(const std::string& stem, const std::string& contents);

}  // namespace mapf::test
