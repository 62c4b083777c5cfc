#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace fsi {

/// Thread count after applying the FSI_THREADS override; always >= 1.
inline int resolve_threads(int configured) {
  if (const char* env = std::getenv("FSI_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return std::max(1, configured);
}

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// fn(worker, begin, end). Callers merge per-worker buffers in worker order,
/// which keeps reductions deterministic for a fixed thread count.
template <class Fn>
void parallel_chunks(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    const int begin = static_cast<int>(static_cast<long>(n) * w / threads);
    const int end = static_cast<int>(static_cast<long>(n) * (w + 1) / threads);
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fsi
