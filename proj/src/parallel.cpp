#include "dk/parallel.hpp"

#include <algorithm>

namespace dk {

namespace {
std::atomic<int> g_threads{0};
// Set while a thread is executing parallel_for jobs; nested loops run inline
// instead of oversubscribing the machine.
thread_local bool g_in_parallel = false;
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
  int n = g_threads.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

void parallel_for_impl(std::size_t begin, std::size_t end,
                       const std::function<void(std::size_t)>& body) {
  if (end <= begin) return;
  const std::size_t jobs = end - begin;
  const std::size_t workers =
      g_in_parallel ? 1 : std::min<std::size_t>(static_cast<std::size_t>(thread_count()), jobs);

  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{begin};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto run = [&]() {
    g_in_parallel = true;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= end) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
    g_in_parallel = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

}  // namespace dk
