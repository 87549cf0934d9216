/*
 * stderr diagnostics, gated by the LTM_LOG environment variable
 * (debug | info | off; default off)
 */
#pragma once

#include <iostream>

namespace mapf {

int log_level();  // 0 = off, 1 = info, 2 = debug

}  // namespace mapf

#define LTM_LOG_INFO(expr)                                \
  do {                                                    \
    if (mapf::log_level() >= 1) std::cerr << "[ltm:info] " << expr << "\n"; \
  } while (0)

#define LTM_LOG_DEBUG(expr)                               \
  do {                                                    \
    if (mapf::log_level() >= 2) std::cerr << "[ltm:debug] " << expr << "\n"; \
  } while (0)
