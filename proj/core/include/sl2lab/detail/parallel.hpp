#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sl2lab::detail {

// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
// processed exactly once; callers write results into per-index slots and
// reduce afterwards in a fixed order, so output does not depend on `threads`.
// The exception from the lowest-numbered failing chunk is rethrown.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body, std::size_t grain = 64) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, n / grain + 1));
  if (workers == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace sl2lab::detail
