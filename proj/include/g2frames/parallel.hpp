#pragma once
// Deterministic map over independent work items. Each item writes only its
// own slot, so the result does not depend on the schedule; the sequential
// path is the reference the parallel path is tested against.

#include <exception>
#include <type_traits>
#include <vector>

namespace g2frames {

enum class Execution { Sequential, Parallel };

template <class F>
auto parallelMap(int n, F&& fn, Execution mode) -> std::vector<std::invoke_result_t<F&, int>> {
  using R = std::invoke_result_t<F&, int>;
  std::vector<R> out(n);
  if (mode == Execution::Sequential) {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  // Exceptions may not cross the OpenMP region; the lowest failing index is
  // rethrown so the reported error matches the sequential run.
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace g2frames
