// Fixed-chunk work scheduling.
//
// All parallel phases in this project follow the same rule: work is cut into
// chunks whose boundaries depend only on the problem size, each chunk writes
// to its own output slot, and chunk results are combined in chunk order.
// Under that rule the result is bit-identical for any worker count.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rootlevel {

class WorkerPool {
 public:
  explicit WorkerPool(int workers) : workers_(workers < 1 ? 1 : workers) {}

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const { return workers_; }

  // Runs fn(chunk_index) for every chunk in [0, chunk_count) and blocks until
  // all are done. Chunks are claimed dynamically, so fn must write only to
  // chunk-owned state. Threads are joined before return; no job state
  // outlives the call.
  void run(std::size_t chunk_count, const std::function<void(std::size_t)>& fn) const {
    if (chunk_count == 0) {
      return;
    }
    if (workers_ == 1 || chunk_count == 1) {
      for (std::size_t c = 0; c < chunk_count; ++c) {
        fn(c);
      }
      return;
    }
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
      while (true) {
        const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= chunk_count) {
          break;
        }
        fn(c);
      }
    };
    std::vector<std::thread> threads;
    const std::size_t spawn =
        std::min<std::size_t>(static_cast<std::size_t>(workers_) - 1, chunk_count - 1);
    threads.reserve(spawn);
    for (std::size_t w = 0; w < spawn; ++w) {
      threads.emplace_back(drain);
    }
    drain();
    for (auto& t : threads) {
      t.join();
    }
  }

 private:
  int workers_;
};

// Splits [0, total) into fixed-size chunks and runs body(begin, end, chunk)
// on the pool. Chunk boundaries depend only on total and chunk_size.
template <typename Body>
void parallel_chunks(const WorkerPool& pool, std::size_t total, std::size_t chunk_size,
                     const Body& body) {
  if (total == 0) {
    return;
  }
  if (chunk_size == 0) {
    chunk_size = 1;
  }
  const std::size_t chunks = (total + chunk_size - 1) / chunk_size;
  std::function<void(std::size_t)> fn = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = begin + chunk_size < total ? begin + chunk_size : total;
    body(begin, end, c);
  };
  pool.run(chunks, fn);
}

}  // namespace rootlevel
