#include "bspforge/threading.hpp"

#include <omp.h>

#include <Eigen/Core>
#include <cstdlib>
#include <thread>

namespace bspforge {

namespace {

int default_threads() {
  if (const char* env = std::getenv("BSPFORGE_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int g_threads = 0;  // 0 = not yet initialized

}  // namespace

void set_thread_count(int n) {
  g_threads = n >= 1 ? n : default_threads();
  omp_set_num_threads(g_threads);
  Eigen::setNbThreads(g_threads);
}

int thread_count() {
  if (g_threads == 0) set_thread_count(0);
  return g_threads;
}

}  // namespace bspforge
