#pragma once

#include <cstdint>
#include <functional>

namespace heterocut {

/// Worker-thread budget. Defaults to HETEROCUT_THREADS if set, otherwise the
/// hardware concurrency. Always at least 1.
int max_threads();
void set_max_threads(int n);

/// Runs body(lo, hi) over contiguous chunks of [begin, end). Callers must
/// write results to disjoint slots indexed by position; under that contract
/// the output is bitwise independent of the thread count.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace heterocut
