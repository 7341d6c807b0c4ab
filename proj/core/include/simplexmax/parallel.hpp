#pragma once

#include <cstddef>
#include <functional>

namespace simplexmax {

int hardware_threads();

// Global worker cap shared by all parallel operations (CLI --threads).
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Tasks are claimed dynamically but results
// must be written to per-task slots by the caller, so outputs do not
// depend on scheduling. The lowest-index exception wins and is rethrown.
void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace simplexmax
