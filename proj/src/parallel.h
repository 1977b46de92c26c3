#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hjsafe::internal {

// Splits [0, n) into `workers` contiguous chunks and runs fn(chunk, begin,
// end) on each. Chunk boundaries depend only on n and workers.
template <typename Fn>
void ParallelChunks(std::size_t n, int workers, Fn&& fn) {
  const std::size_t chunks =
      std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(chunks - 1);
  const std::size_t base = n / chunks;
  const std::size_t extra = n % chunks;
  std::size_t begin = 0;
  std::size_t first_end = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t end = begin + base + (c < extra ? 1 : 0);
    if (c == 0) {
      first_end = end;
    } else {
      threads.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    }
    begin = end;
  }
  fn(std::size_t{0}, std::size_t{0}, first_end);
}

}  // namespace hjsafe::internal
