#include "log.hpp"

#include <cstdlib>
#include <cstring>

namespace mapf {

int log_level()
{
  static const int level = [] {
    const char* env = std::getenv("LTM_LOG");
    if (env == nullptr || std::strcmp(env, "off") == 0) return 0;
    if (std::strcmp(env, "debug") == 0) return 2;
    if (std::strcmp(env, "info") == 0) return 1;
    return 0;
  }();
  return level;
}

}  // namespace mapf
