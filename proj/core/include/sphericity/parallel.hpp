#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sphericity {

// Runs fn(i) for i in [0, count) across worker threads and collects results
// by index, so the output never depends on scheduling. fn must derive any
// randomness it needs from i alone for runs to be reproducible.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn fn, unsigned threads = 0) {
  std::vector<T> out(count);
  if (count == 0) return out;
  unsigned workers = threads ? threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (static_cast<std::size_t>(workers) > count)
    workers = static_cast<unsigned>(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count;
             i = next.fetch_add(1))
          out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(count);  // stop handing out work
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace sphericity
