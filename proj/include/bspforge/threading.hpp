#pragma once

namespace bspforge {

// Caps OpenMP (and thereby Eigen) parallelism. n < 1 resets to the
// hardware default or BSPFORGE_THREADS when set.
void set_thread_count(int n);
int thread_count();

}  // namespace bspforge
