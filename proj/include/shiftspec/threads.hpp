#pragma once

#include <cstddef>
#include <functional>

namespace shiftspec {

// Worker count for batch operations. 0 = hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(begin, end) over [0, count) split into fixed-size chunks. Chunk
// boundaries depend only on (count, chunk_size), never on the thread count,
// so callers that combine per-chunk results in chunk order get bit-stable
// output regardless of scheduling.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace shiftspec
