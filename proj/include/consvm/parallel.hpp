#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace consvm {

// Runs f(0), ..., f(n-1) on up to `threads` workers with a static strided
// schedule. Tasks must be independent; callers that care about ordering
// write into preassigned slots and reduce sequentially afterwards, which
// keeps results identical for every worker count.
template <typename F>
void parallel_for(int n, int threads, F&& f) {
  if (n <= 0) return;
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int worker = 0; worker < threads; ++worker) {
    pool.emplace_back([&, worker]() {
      try {
        for (int i = worker; i < n; i += threads) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace consvm
