#pragma once

#include <cstddef>
#include <functional>

namespace semivar {

// Hardware concurrency, capped by SEMIVAR_THREADS when set.
std::size_t worker_count();

// Runs fn(0..n-1) on up to worker_count() threads. Callers write results
// into per-index slots, so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace semivar
