#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace unimod {

inline unsigned default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Splits [0, total) into fixed blocks of `block` items and evaluates
// f(block_index, begin, end) for each on up to `workers` threads. Results are
// returned in block order, so any in-order fold over them is independent of
// the number of workers. The exception of the lowest failing block wins.
template <class Result, class F>
std::vector<Result> run_blocks(std::size_t total, std::size_t block, unsigned workers, F&& f) {
  block = std::max<std::size_t>(block, 1);
  const std::size_t blocks = (total + block - 1) / block;
  std::vector<Result> results(blocks);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_block = blocks;
  std::exception_ptr failure;

  auto work = [&] {
    while (true) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      {
        std::lock_guard lock(failure_mutex);
        if (b > failed_block) return;
      }
      try {
        const std::size_t begin = b * block;
        results[b] = f(b, begin, std::min(total, begin + block));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (b < failed_block) {
          failed_block = b;
          failure = std::current_exception();
        }
      }
    }
  };

  const unsigned n = static_cast<unsigned>(
      std::min<std::size_t>(std::max(workers, 1u), std::max<std::size_t>(blocks, 1)));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace unimod
