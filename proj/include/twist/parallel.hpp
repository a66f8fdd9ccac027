#pragma once
#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace twist {

// Split [0, n) into contiguous chunks, one per worker; fn(begin, end, worker).
// Chunk boundaries depend only on (n, threads).
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  const int k = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (k == 1) {
    fn(std::size_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(k);
  for (int w = 0; w < k; ++w) {
    std::size_t b = n * w / k, e = n * (w + 1) / k;
    pool.emplace_back([&, b, e, w] {
      try {
        fn(b, e, w);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace twist
