#pragma once

#include <functional>

namespace abelext {

// Calls body(begin, end) on contiguous chunks covering [0, n), using at most `jobs` threads.
// An exception from any chunk is rethrown after all threads finish; the lowest chunk wins.
void parallel_chunks(long n, int jobs, const std::function<void(long, long)> &body);

// Worker count for a --jobs value: 0 means the hardware concurrency.
auto effective_jobs(int jobs) -> int;

} // namespace abelext
