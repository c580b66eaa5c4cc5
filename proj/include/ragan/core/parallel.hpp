#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ragan::core {

// Runtime switch between the OpenMP kernels and their serial reference
// implementations. Tests flip this to check that both paths agree; the
// bench tool times them against each other.
bool parallel_enabled();
void set_parallel_enabled(bool on);

int max_threads();
void set_num_threads(int n);

}  // namespace ragan::core
