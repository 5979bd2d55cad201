#include "ltrace/parallel.hpp"

#include <atomic>

namespace ltrace {

namespace {
std::atomic<int> g_jobs{0};
}

void set_max_jobs(int jobs) { g_jobs = std::max(0, jobs); }

int max_jobs() {
  const int j = g_jobs.load();
  if (j > 0) return j;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace ltrace
