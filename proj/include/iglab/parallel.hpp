// Static-partition parallel loop.
//
// [0,n) is split into `threads` contiguous chunks; chunk boundaries depend
// only on n and the thread count. Callers write results to disjoint index
// ranges (or merge integer-exact per-chunk accumulators in chunk order), so
// output is identical for any thread count.
#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace iglab {

// f(chunk_index, begin, end) runs once per non-empty chunk.
template <typename F>
void parallel_chunks(std::size_t n, int threads, F&& f) {
  const std::size_t t =
      std::max<std::size_t>(1, static_cast<std::size_t>(threads));
  if (t == 1 || n <= 1) {
    if (n > 0) f(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  for (std::size_t c = 0; c < t; ++c) {
    const std::size_t begin = n * c / t;
    const std::size_t end = n * (c + 1) / t;
    if (begin >= end) continue;
    if (c + 1 == t) {
      f(c, begin, end);  // run the last chunk on the calling thread
    } else {
      pool.emplace_back([&f, c, begin, end] { f(c, begin, end); });
    }
  }
  for (auto& th : pool) th.join();
}

// f(index) runs once per element.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
  parallel_chunks(n, threads,
                  [&f](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) f(i);
                  });
}

}  // namespace iglab
