#include "heterocut/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace heterocut {

namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("HETEROCUT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& thread_budget() {
  static std::atomic<int> budget{initial_thread_count()};
  return budget;
}

}  // namespace

int max_threads() { return thread_budget().load(); }

void set_max_threads(int n) { thread_budget().store(std::max(1, n)); }

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<std::int64_t>(max_threads(), count));
  if (workers == 1) {
    body(begin, end);
    return;
  }

  const std::int64_t chunk = (count + workers - 1) / workers;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);

  auto run = [&](std::int64_t lo, std::int64_t hi) {
    try {
      body(lo, hi);
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };

  for (int w = 1; w < workers; ++w) {
    const std::int64_t lo = begin + w * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(run, lo, hi);
  }
  run(begin, std::min(end, begin + chunk));
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace heterocut
