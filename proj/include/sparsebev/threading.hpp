#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sparsebev {

// SPARSEBEV_DETERMINISTIC=1 forces the serial reference path everywhere.
inline bool deterministic_mode() {
  const char* v = std::getenv("SPARSEBEV_DETERMINISTIC");
  return v != nullptr && v[0] == '1';
}

inline int effective_threads(int requested) {
  if (deterministic_mode()) return 1;
  return requested < 1 ? 1 : requested;
}

// Splits [0, n) into contiguous chunks, one worker per chunk. Workers only
// write to disjoint per-chunk state, so results are merged by the caller in
// chunk order and outputs stay identical to a serial run.
inline void parallel_chunks(size_t n, int threads,
                            const std::function<void(int chunk, size_t begin, size_t end)>& fn) {
  threads = effective_threads(threads);
  if (threads <= 1 || n <= 1) {
    fn(0, 0, n);
    return;
  }
  size_t nthreads = std::min<size_t>(static_cast<size_t>(threads), n);
  size_t per = (n + nthreads - 1) / nthreads;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (size_t t = 0; t < nthreads; ++t) {
    size_t begin = t * per;
    size_t end = std::min(n, begin + per);
    if (begin >= end) break;
    pool.emplace_back([&fn, t, begin, end] { fn(static_cast<int>(t), begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sparsebev
