#pragma once
#include <cstddef>
#include <functional>

namespace fmlab {

/// Worker count used when a call passes threads == 0. Defaults to hardware concurrency.
unsigned default_threads();
void set_default_threads(unsigned n);

/// Runs body(i) for i in [0, n) on up to `threads` workers with static contiguous chunks.
/// Callers write results into preallocated slots, so merge order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace fmlab
