#pragma once

#include <cstdint>
#include <functional>

namespace mpdcnn {

// Worker count for all internal parallelism. 0 restores the hardware default.
void set_num_threads(int n);
int num_threads();

// Runs fn(begin, end) over [0, n) split into one contiguous chunk per worker.
// Chunk boundaries depend only on n and the worker count, and every index is
// processed by exactly one invocation, so callers that write disjoint outputs
// per index get results identical to sequential execution.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn);

}  // namespace mpdcnn
