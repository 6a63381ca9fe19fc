#include "aging/parallel.hpp"

namespace aging {

namespace {
int default_threads = -1;
}

void set_thread_limit(int threads) {
  if (default_threads < 0) default_threads = omp_get_max_threads();
  omp_set_num_threads(threads >= 1 ? threads : default_threads);
}

int thread_limit() { return omp_get_max_threads(); }

}  // namespace aging
