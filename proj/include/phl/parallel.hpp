#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace phl {

// Worker count: PHL_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned worker_count();
void set_worker_count(unsigned n);  // 0 restores the default

// Runs body(i) for i in [begin, end) across workers. Each index is visited exactly once;
// results must not depend on scheduling.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

// Pairwise sum with fixed fan-in, independent of the worker count.
double deterministic_sum(std::span<const double> values);

}  // namespace phl
