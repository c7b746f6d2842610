#include "abelext/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace abelext {

auto effective_jobs(int jobs) -> int {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(long n, int jobs, const std::function<void(long, long)> &body) {
  if (n <= 0) return;
  int workers = static_cast<int>(std::min<long>(effective_jobs(jobs), n));
  if (workers == 1) {
    body(0, n);
    return;
  }
  long chunks = std::min<long>(n, static_cast<long>(workers) * 8);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<long> next{0};
  auto run = [&] {
    for (long c; (c = next.fetch_add(1)) < chunks;) {
      long b = n * c / chunks, e = n * (c + 1) / chunks;
      try {
        body(b, e);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace abelext
