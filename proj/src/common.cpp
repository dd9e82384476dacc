#include "bloch/common.hpp"

#include <omp.h>

namespace bloch {

void set_thread_count(int threads) {
  if (threads < 1) throw ValidationError("thread count must be positive");
  omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

std::vector<MultiIndex> box_indices(int dim, int lo, int hi) {
  std::vector<MultiIndex> out;
  if (dim < 1 || hi < lo) return out;
  MultiIndex k(dim, lo);
  while (true) {
    out.push_back(k);
    int axis = dim - 1;
    while (axis >= 0 && k[axis] == hi) {
      k[axis] = lo;
      --axis;
    }
    if (axis < 0) break;
    ++k[axis];
  }
  return out;
}

}  // namespace bloch
