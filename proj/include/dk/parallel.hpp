#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dk {

// Process-wide worker-pool size. 0 means "machine parallelism". The CLI sets
// this from --threads / DK_THREADS; library callers may set it directly.
void set_thread_count(int n);
int thread_count();

namespace detail {

void parallel_for_impl(std::size_t begin, std::size_t end,
                       const std::function<void(std::size_t)>& body);

}  // namespace detail

// Runs body(i) for i in [begin, end) on the worker pool. Jobs must write to
// disjoint state; the first exception thrown by any job is rethrown on the
// calling thread after all workers join.
template <typename F>
void parallel_for(std::size_t begin, std::size_t end, F&& body) {
  detail::parallel_for_impl(begin, end, std::function<void(std::size_t)>(std::forward<F>(body)));
}

}  // namespace dk
