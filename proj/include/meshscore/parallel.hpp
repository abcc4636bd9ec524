#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace meshscore {

// Number of workers to use when the caller passes 0.
inline std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Splits [0, n) into `workers` contiguous shards and runs fn(shard, begin, end)
// for each one. Shard boundaries depend only on (n, workers); callers merge
// per-shard results in shard order so output does not depend on scheduling.
// The first exception thrown by any shard is rethrown.
template <typename Fn>
void for_each_shard(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers == 0) workers = default_workers();
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t s = 0; s < workers; ++s) {
    const std::size_t begin = n * s / workers;
    const std::size_t end = n * (s + 1) / workers;
    threads.emplace_back([&, s, begin, end] {
      try {
        fn(s, begin, end);
      } catch (...) {
        failures[s] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

inline std::size_t shard_count(std::size_t n, std::size_t workers) {
  if (workers == 0) workers = default_workers();
  return std::max<std::size_t>(1, std::min(workers, n));
}

}  // namespace meshscore
