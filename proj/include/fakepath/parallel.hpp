// SPDX-License-Identifier: Apache-2.0
//
// Index-parallel execution of independent kernels.
//
// threads == 1 runs the plain serial loop; that path is the reference
// implementation the tests compare against. threads == 0 lets OpenMP pick
// the thread count. Kernels must write to disjoint per-index slots and draw
// randomness from per-index substreams, so the output never depends on the
// schedule.

#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fakepath::parallel {

struct ExecPolicy {
  int threads = 0;  // 0 = runtime default, 1 = serial reference
  bool serial() const { return threads == 1; }
};

template <typename F>
void run_indexed(std::size_t n, const ExecPolicy& policy, F&& body) {
  if (policy.serial()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
  const std::int64_t m = static_cast<std::int64_t>(n);
  if (policy.threads > 0) {
#pragma omp parallel for schedule(static) num_threads(policy.threads)
    for (std::int64_t i = 0; i < m; ++i) body(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) body(static_cast<std::size_t>(i));
  }
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace fakepath::parallel
