#ifndef RIS_PARALLEL_HPP
#define RIS_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ris {

/// Number of workers to use when the caller passes jobs = 0.
inline std::size_t default_jobs() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/**
 * Runs body(i) for i in [0, count) on up to `jobs` threads, each thread taking
 * a contiguous block. Results must be written to per-index slots; the call
 * order inside a block is ascending, so output is independent of `jobs`.
 * The first exception thrown by any block is rethrown on the calling thread.
 */
template <typename Body>
void parallel_for(std::size_t count, std::size_t jobs, Body&& body) {
  if (jobs == 0) jobs = default_jobs();
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      const std::size_t begin = count * w / jobs;
      const std::size_t end = count * (w + 1) / jobs;
      workers.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ris

#endif  // RIS_PARALLEL_HPP
