#include "xicor/parallel.hpp"

#include <omp.h>

namespace xicor {

namespace {
int default_threads() {
  static const int n = omp_get_max_threads();
  return n;
}
}  // namespace

int max_threads() { return omp_get_max_threads(); }

void set_num_threads(int threads) {
  const int fallback = default_threads();
  omp_set_num_threads(threads >= 1 ? threads : fallback);
}

}  // namespace xicor
