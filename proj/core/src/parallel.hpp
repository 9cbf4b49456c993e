#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace trdecomp::detail {

// Runs task(k) for k in [0, count) on up to `threads` workers. Tasks must not
// throw and must write only to their own output slot.
template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task&& task) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) task(k);
    });
  }
}

}  // namespace trdecomp::detail
